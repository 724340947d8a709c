#pragma once

#include <set>
#include <string>
#include <vector>

#include "minfind/logic.hpp"
#include "minfind/model.hpp"

namespace minfind {

/// Constant-to-constant rule c_i -> c_j.
struct DRule {
  std::string from;
  std::string to;
  bool operator==(const DRule&) const = default;
};

/// Function rule f(c1..cn) -> c; user constants are the 0-ary case.
struct CRule {
  std::string function;
  std::vector<std::string> args;
  std::string result;
  bool operator==(const CRule&) const = default;
};

struct Fact {
  std::string predicate;
  std::vector<std::string> args;
  bool operator==(const Fact&) const = default;
};

/// A flat ground term: a naming constant, or a symbol applied to naming constants.
struct FlatTerm {
  std::string symbol;
  std::vector<std::string> args;
  bool naming_constant = false;

  static FlatTerm constant(std::string name) { return {std::move(name), {}, true}; }
  static FlatTerm apply(std::string fn, std::vector<std::string> args) { return {std::move(fn), std::move(args), false}; }
  bool operator==(const FlatTerm&) const = default;
};

struct GroundEquation {
  FlatTerm lhs;
  FlatTerm rhs;
};

/// Total order on ground flat terms: naming constants by their position in
/// `constants` (earlier is smaller), and every application above every constant.
class TermOrder {
 public:
  TermOrder(std::vector<std::string> constants, std::vector<std::string> symbols);
  /// True when a is strictly greater than b.
  bool greater(const FlatTerm& a, const FlatTerm& b) const;
  int rank(const std::string& constant) const;
  int symbol_rank(const std::string& symbol) const;
  const std::vector<std::string>& constants() const { return constants_; }

 private:
  std::vector<std::string> constants_;
  std::vector<std::string> symbols_;
  std::map<std::string, int> rank_;
  std::map<std::string, int> symbol_rank_;
};

/// Convergent ground presentation of a model.
struct RewriteRep {
  std::vector<DRule> d_rules;
  std::vector<CRule> c_rules;
  std::vector<Fact> facts;
  /// Naming constants from least to greatest.
  std::vector<std::string> constant_order;

  /// Normal form of a ground term built from functions and naming constants.
  std::string normalize(const Term& ground) const;
  std::string normalize_constant(const std::string& constant) const;
  /// Constants that are not the left side of a D-rule.
  std::set<std::string> canonical_constants() const;
  /// Right sides irreducible, each left side irreducible by the other rules.
  bool is_self_reduced() const;
};

/// Orients, inter-reduces and iterates until the rule set is convergent.
/// Every equation must mention at least one naming constant.
RewriteRep complete(const std::vector<GroundEquation>& equations, const TermOrder& order);

/// The basic representation of `m` (equalities among naming constants and
/// the function graphs over all naming constants), completed.
RewriteRep to_rewrite_rep(const FiniteModel& m);

/// Term order used for `m`: sorts in signature order, constants by index.
TermOrder model_term_order(const FiniteModel& m);

}  // namespace minfind
