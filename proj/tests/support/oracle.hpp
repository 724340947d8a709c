#pragma once

#include <chrono>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "minfind/hom.hpp"
#include "minfind/logic.hpp"
#include "minfind/model.hpp"
#include "minfind/solver.hpp"

namespace minfind::testing {

SolverConfig test_solver(std::chrono::milliseconds timeout = std::chrono::milliseconds(60000));
std::string corpus_dir();

struct CorpusEntry {
  std::string name;
  std::string text;
  Theory theory;
  Profile profile;
};

/// Reads a "; bound: N" or "; bound: S=N T=M" header line.
Profile parse_bound_header(const std::string& text, const Signature& sig);
CorpusEntry load_corpus_entry(const std::string& name);
std::vector<CorpusEntry> load_corpus();

/// Tarski evaluation written independently of the library's evaluator.
bool oracle_holds(const FiniteModel& m, const Formula& f);
/// Every user axiom holds.
bool oracle_satisfies(const FiniteModel& m, const Theory& t);

/// Calls `visit` on every interpretation of the signature with these domain sizes.
void for_each_interpretation(std::shared_ptr<const Signature> sig, const std::map<std::string, int>& sizes,
                             const std::function<void(const FiniteModel&)>& visit);
/// Every model of the user axioms of `t` whose domains fit within `p`.
std::vector<FiniteModel> bounded_models(const Theory& t, const Profile& p);

/// Calls `visit` on each per-sort set map from a to b until it returns false.
void for_each_map(const FiniteModel& a, const FiniteModel& b,
                  const std::function<bool(const std::map<std::string, std::vector<Element>>&)>& visit);
bool oracle_preserves(const FiniteModel& a, const FiniteModel& b, const std::map<std::string, std::vector<Element>>& h,
                      bool strong = false);
bool oracle_hom(const FiniteModel& a, const FiniteModel& b, bool injective = false);
std::vector<std::map<std::string, std::vector<Element>>> oracle_homs(const FiniteModel& a, const FiniteModel& b);
bool oracle_isomorphic(const FiniteModel& a, const FiniteModel& b);
bool oracle_strictly_below(const FiniteModel& a, const FiniteModel& b);
bool oracle_equivalent(const FiniteModel& a, const FiniteModel& b);
/// Some endomorphism is not injective.
bool oracle_has_collapsing_endo(const FiniteModel& m);

FiniteModel random_model(std::shared_ptr<const Signature> sig, const std::map<std::string, int>& sizes, std::mt19937& rng,
                         double density = 0.4);
/// An isomorphic copy with the elements of every sort shuffled.
FiniteModel permuted(const FiniteModel& m, std::mt19937& rng);

/// Proper submodels (function-closed element subsets, with any subset of the
/// facts there) that satisfy `t`.
bool has_satisfying_proper_submodel(const Theory& t, const FiniteModel& m);
/// Same universe and functions, strictly fewer true atoms, still satisfying `t`.
bool has_satisfying_fact_subset(const Theory& t, const FiniteModel& m);

}  // namespace minfind::testing
