#include <random>

#include "doctest.h"
#include "minfind/error.hpp"
#include "minfind/hom.hpp"
#include "minfind/minimize.hpp"
#include "minfind/support.hpp"
#include "minfind/syntax.hpp"
#include "oracle.hpp"

using namespace minfind;
using namespace minfind::testing;

namespace {

const char* kPQ =
    "(declare-sort S 0)(declare-fun P (S) Bool)(declare-fun Q (S) Bool)"
    "(assert (exists ((x S)) (P x)))(assert (exists ((x S)) (Q x)))";
const char* kP = "(declare-sort S 0)(declare-fun P (S) Bool)(assert (exists ((x S)) (P x)))";

FiniteModel model_of(const Theory& t, int size) {
  return FiniteModel(std::make_shared<const Signature>(t.user_signature()), {{"S", size}});
}

// A few models of each corpus theory, spread over the enumeration.
std::vector<FiniteModel> sample(const std::vector<FiniteModel>& all, std::size_t count) {
  std::vector<FiniteModel> out;
  if (all.empty()) return out;
  std::size_t step = std::max<std::size_t>(1, all.size() / count);
  for (std::size_t i = all.size() - 1; out.size() < count; i -= std::min(i, step)) {
    out.push_back(all[i]);
    if (i == 0) break;
  }
  return out;
}

bool strictly_below_any(const FiniteModel& m, const std::vector<FiniteModel>& models) {
  for (const auto& n : models)
    if (oracle_strictly_below(n, m)) return true;
  return false;
}

}  // namespace

TEST_CASE("a_minimize splits the single P and Q element") {
  auto t = parse_theory(kPQ);
  auto bounded = bound_theory(t, Profile::uniform(t.signature, 2));
  auto start = model_of(t, 1);
  start.set_predicate("P", Tuple{0}, true);
  start.set_predicate("Q", Tuple{0}, true);
  auto report = a_minimize(bounded, start, test_solver());
  CHECK(report.claim == Claim::AMinimal);
  CHECK(report.iterations >= 1);
  auto split = model_of(t, 2);
  split.set_predicate("P", Tuple{0}, true);
  split.set_predicate("Q", Tuple{1}, true);
  CHECK(oracle_equivalent(report.output, split));
  CHECK(oracle_satisfies(report.output, t));
}

TEST_CASE("two P elements are a-minimal but not i-minimal") {
  auto t = parse_theory(kP);
  auto bounded = bound_theory(t, Profile::uniform(t.signature, 2));
  auto both = model_of(t, 2);
  both.set_predicate("P", Tuple{0}, true);
  both.set_predicate("P", Tuple{1}, true);
  auto report = a_minimize(bounded, both, test_solver());
  CHECK(report.claim == Claim::AMinimal);
  CHECK(report.iterations == 0);
  CHECK(oracle_isomorphic(report.output, both));
  CHECK(has_satisfying_proper_submodel(t, report.output));

  auto i = i_minimize(bounded, both, test_solver());
  CHECK(i.claim == Claim::IMinimal);
  CHECK(i.output.size("S") == 2);
  CHECK_FALSE(has_satisfying_fact_subset(t, i.output));
}

TEST_CASE("models that violate the theory are rejected") {
  auto t = parse_theory(kP);
  auto bounded = bound_theory(t, Profile::uniform(t.signature, 2));
  CHECK_THROWS_AS(i_minimize(bounded, model_of(t, 1), test_solver()), ModelError);
  CHECK_THROWS_AS(a_minimize(bounded, model_of(t, 3), test_solver()), ModelError);
}

TEST_CASE("compute_core on small examples") {
  auto t = parse_theory(kPQ);
  auto both = model_of(t, 3);
  both.set_predicate("P", Tuple{0}, true);
  both.set_predicate("Q", Tuple{0}, true);
  both.set_predicate("P", Tuple{1}, true);
  both.set_predicate("Q", Tuple{2}, true);
  auto core = compute_core(both, test_solver());
  CHECK(core.claim == Claim::Core);
  CHECK(core.output.size("S") == 1);
  CHECK_FALSE(oracle_has_collapsing_endo(core.output));

  auto split = model_of(t, 2);
  split.set_predicate("P", Tuple{0}, true);
  split.set_predicate("Q", Tuple{1}, true);
  auto rigid = compute_core(split, test_solver());
  CHECK(rigid.iterations == 0);
  CHECK(oracle_isomorphic(rigid.output, split));
}

TEST_CASE("cores are hom-equivalent retracts and unique up to isomorphism") {
  auto sig = std::make_shared<const Signature>(
      parse_theory("(declare-sort S 0)(declare-fun f (S) S)(declare-fun P (S) Bool)(declare-fun E (S S) Bool)").signature);
  std::mt19937 rng(21);
  for (int i = 0; i < 12; ++i) {
    auto m = random_model(sig, {{"S", 1 + static_cast<int>(rng() % 4)}}, rng, 0.3);
    auto core = compute_core(m, test_solver()).output;
    CHECK_FALSE(oracle_has_collapsing_endo(core));
    CHECK(oracle_equivalent(core, m));
    CHECK(core.size("S") <= m.size("S"));
    auto again = compute_core(permuted(m, rng), test_solver()).output;
    CHECK(oracle_isomorphic(core, again));
  }
}

TEST_CASE("minimizers on corpus samples satisfy their guarantees") {
  for (const auto& entry : load_corpus()) {
    auto all = bounded_models(entry.theory, entry.profile);
    if (all.empty()) continue;
    auto bounded = bound_theory(entry.theory, entry.profile);
    for (const auto& m : sample(all, 2)) {
      CAPTURE(entry.name);
      auto i = i_minimize(bounded, m, test_solver());
      CHECK(i.claim == Claim::IMinimal);
      CHECK(oracle_satisfies(i.output, entry.theory));
      CHECK_FALSE(has_satisfying_fact_subset(entry.theory, i.output));
      for (const auto& s : i.output.sorts()) CHECK(i.output.size(s) == m.size(s));

      auto a = a_minimize(bounded, m, test_solver());
      CHECK(a.claim == Claim::AMinimal);
      CHECK(oracle_satisfies(a.output, entry.theory));
      CHECK(oracle_hom(a.output, m));
      CHECK_FALSE(strictly_below_any(a.output, all));

      auto both = minimize_both(bounded, m, test_solver());
      CHECK(both.claim == Claim::AThenI);
      CHECK_FALSE(strictly_below_any(both.output, all));
      CHECK_FALSE(has_satisfying_fact_subset(entry.theory, both.output));
    }
  }
}

TEST_CASE("the support stream covers every bounded model with an antichain") {
  for (const auto& entry : load_corpus()) {
    CAPTURE(entry.name);
    auto all = bounded_models(entry.theory, entry.profile);
    auto stream = set_of_support(entry.theory, entry.profile, test_solver());
    CHECK(stream.status == StreamStatus::Exhausted);
    CHECK(stream.avoid.size() == stream.models.size());
    CHECK(stream.models.empty() == all.empty());
    for (const auto& m : all) {
      bool covered = false;
      for (const auto& r : stream.models) covered = covered || oracle_hom(r.output, m);
      CHECK(covered);
    }
    for (std::size_t a = 0; a < stream.models.size(); ++a)
      for (std::size_t b = 0; b < stream.models.size(); ++b)
        if (a != b) CHECK_FALSE(oracle_hom(stream.models[a].output, stream.models[b].output));
  }
}

TEST_CASE("the stream honours max_models and reports each model") {
  auto entry = load_corpus_entry("either_or");
  std::size_t seen = 0;
  StreamOptions options;
  options.max_models = 1;
  options.on_model = [&](const MinimizationReport&) { ++seen; };
  auto stream = set_of_support(entry.theory, entry.profile, test_solver(), options);
  CHECK(stream.models.size() == 1);
  CHECK(seen == 1);
  CHECK(stream.status == StreamStatus::Truncated);
}

TEST_CASE("the enumerated-types stream matches the support stream") {
  for (const auto& name : {"pq_split", "exists_p", "either_or", "cycle", "two_sorts", "contradiction"}) {
    CAPTURE(name);
    auto entry = load_corpus_entry(name);
    auto us = set_of_support(entry.theory, entry.profile, test_solver());
    auto et = et_stream(entry.theory, entry.profile, test_solver());
    CHECK(et.status == StreamStatus::Exhausted);
    REQUIRE(us.models.size() == et.models.size());
    for (const auto& u : us.models) {
      bool matched = false;
      for (const auto& e : et.models) matched = matched || oracle_equivalent(u.output, e.output);
      CHECK(matched);
    }
    CHECK(et.check_sat_calls >= us.check_sat_calls);
  }
}

TEST_CASE("solver timeouts surface as an incomplete stream") {
  auto entry = load_corpus_entry("successor_edge");
  auto stream = set_of_support(entry.theory, entry.profile, test_solver(std::chrono::milliseconds(1)));
  CHECK(stream.status == StreamStatus::Incomplete);
}

TEST_CASE("quantifier expansion does not change the support stream") {
  for (const auto& name : {"pq_split", "either_or", "cycle", "two_sorts"}) {
    CAPTURE(name);
    auto entry = load_corpus_entry(name);
    auto plain = test_solver();
    plain.expand_quantifiers = false;
    auto a = set_of_support(entry.theory, entry.profile, test_solver());
    auto b = set_of_support(entry.theory, entry.profile, plain);
    REQUIRE(a.models.size() == b.models.size());
    for (const auto& x : a.models) {
      bool matched = false;
      for (const auto& y : b.models) matched = matched || oracle_equivalent(x.output, y.output);
      CHECK(matched);
    }
  }
}

TEST_CASE("a-minimal cores have no satisfying proper submodel") {
  std::size_t cores = 0;
  for (const auto& entry : load_corpus()) {
    auto all = bounded_models(entry.theory, entry.profile);
    if (all.empty()) continue;
    auto bounded = bound_theory(entry.theory, entry.profile);
    for (const auto& m : sample(all, 3)) {
      CAPTURE(entry.name);
      auto a = a_minimize(bounded, m, test_solver()).output;
      if (oracle_has_collapsing_endo(a)) continue;
      ++cores;
      CHECK_FALSE(has_satisfying_proper_submodel(entry.theory, a));
    }
  }
  CHECK(cores > 10);
}
