#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "minfind/model.hpp"

namespace minfind {

/// Unrestricted: preserves function graphs and true atoms.
/// Injective: additionally one-to-one per sort.
/// Strong: predicate truth preserved in both directions.
/// Embedding: injective and strong.
enum class HomKind { Unrestricted, Injective, Strong, Embedding };

struct Hom {
  std::map<std::string, std::vector<Element>> map;
  HomKind kind = HomKind::Unrestricted;

  Element operator()(const std::string& sort, Element e) const { return map.at(sort).at(static_cast<std::size_t>(e)); }
  bool operator==(const Hom& other) const { return map == other.map; }
};

/// Checks every requirement of `kind` for the given per-sort map.
bool is_hom(const FiniteModel& a, const FiniteModel& b, const Hom& h, HomKind kind);

/// Exhaustive backtracking search; nullopt means no map of that kind exists.
std::optional<Hom> find_hom(const FiniteModel& a, const FiniteModel& b, HomKind kind = HomKind::Unrestricted);

struct PreorderResult {
  bool below = false;  // a ≼ b
  bool above = false;  // b ≼ a
  bool equivalent() const { return below && above; }
};

PreorderResult hom_preorder(const FiniteModel& a, const FiniteModel& b);
/// a ≼ b and not b ≼ a.
bool is_strictly_below(const FiniteModel& a, const FiniteModel& b);
bool hom_equivalent(const FiniteModel& a, const FiniteModel& b);
bool isomorphic(const FiniteModel& a, const FiniteModel& b);

Hom compose(const Hom& first, const Hom& second);
Hom identity_hom(const FiniteModel& m);
bool is_injective(const Hom& h);
bool is_surjective(const Hom& h, const FiniteModel& target);

}  // namespace minfind
