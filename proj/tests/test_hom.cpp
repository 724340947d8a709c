#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "minfind/diagram.hpp"
#include "minfind/error.hpp"
#include "minfind/hom.hpp"
#include "minfind/sentences.hpp"
#include "minfind/solver.hpp"
#include "minfind/syntax.hpp"
#include "oracle.hpp"

using namespace minfind;
using namespace minfind::testing;

namespace {

std::shared_ptr<const Signature> sig_of(const std::string& decls) {
  return std::make_shared<const Signature>(parse_theory(decls).signature);
}

const char* kPQ = "(declare-sort S 0)(declare-fun P (S) Bool)(declare-fun Q (S) Bool)";

FiniteModel pq_one(std::shared_ptr<const Signature> sig) {
  FiniteModel a(sig, {{"S", 1}});
  a.set_predicate("P", Tuple{0}, true);
  a.set_predicate("Q", Tuple{0}, true);
  return a;
}

FiniteModel pq_split(std::shared_ptr<const Signature> sig) {
  FiniteModel b(sig, {{"S", 2}});
  b.set_predicate("P", Tuple{0}, true);
  b.set_predicate("Q", Tuple{1}, true);
  return b;
}

// The 3-element cycle of f with c on the last element.
FiniteModel cycle_model() {
  auto sig = sig_of("(declare-sort S 0)(declare-fun f (S) S)(declare-const c S)");
  FiniteModel m(sig, {{"S", 3}});
  m.set_function("f", Tuple{0}, 2);
  m.set_function("f", Tuple{1}, 0);
  m.set_function("f", Tuple{2}, 1);
  m.set_function("c", Tuple{}, 2);
  return m;
}

std::set<std::string> conjunct_texts(const Formula& body) {
  std::set<std::string> out;
  if (body.is(Formula::Kind::And)) {
    for (const auto& c : body.children()) out.insert(print_formula(c));
  } else {
    out.insert(print_formula(body));
  }
  return out;
}

// Solver verdict for: the closed diagram of `p` plus `sentence` over `extension`.
bool sat_with_diagram(const FiniteModel& p, const Formula& sentence, const Signature& extension) {
  Signature sig = p.signature();
  sig.merge(naming_signature(p));
  sig.merge(extension);
  SolverSession s(test_solver(), sig);
  s.assert_formula(closed_diagram(p));
  for (const auto& sort : p.sorts()) s.close_sort(sort, p.element_names(sort));
  s.assert_formula(sentence);
  auto r = s.check_sat();
  REQUIRE(r != SatResult::Unknown);
  return r == SatResult::Sat;
}

std::vector<FiniteModel> random_models(std::shared_ptr<const Signature> sig, int count, int max_size, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<FiniteModel> out;
  for (int i = 0; i < count; ++i) {
    std::map<std::string, int> sizes;
    for (const auto& s : sig->sorts()) sizes[s] = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_size));
    out.push_back(random_model(sig, sizes, rng, 0.35));
  }
  return out;
}

}  // namespace

TEST_CASE("find_hom on the split example") {
  auto sig = sig_of(kPQ);
  auto a = pq_one(sig);
  auto b = pq_split(sig);
  auto h = find_hom(b, a);
  REQUIRE(h.has_value());
  CHECK(h->map.at("S") == std::vector<Element>{0, 0});
  CHECK_FALSE(find_hom(a, b).has_value());
  CHECK(is_strictly_below(b, a));
  CHECK_FALSE(is_strictly_below(a, b));
}

TEST_CASE("identity and reflexivity") {
  auto sig = sig_of("(declare-sort S 0)(declare-fun f (S) S)(declare-fun P (S) Bool)(declare-fun E (S S) Bool)");
  for (const auto& m : random_models(sig, 20, 4, 1)) {
    CHECK(find_hom(m, m).has_value());
    CHECK(is_hom(m, m, identity_hom(m), HomKind::Embedding));
    CHECK(hom_preorder(m, m).equivalent());
    CHECK(isomorphic(m, m));
  }
}

TEST_CASE("signature mismatch is an error") {
  auto a = pq_one(sig_of(kPQ));
  FiniteModel other(sig_of("(declare-sort T 0)(declare-fun R (T) Bool)"), {{"T", 1}});
  CHECK_THROWS_AS(find_hom(a, other), ModelError);
}

TEST_CASE("find_hom is complete against set-map enumeration, for every kind") {
  auto sig = sig_of("(declare-sort S 0)(declare-fun f (S) S)(declare-fun P (S) Bool)(declare-const c S)");
  auto models = random_models(sig, 18, 4, 2);
  for (const auto& a : models)
    for (const auto& b : models) {
      auto h = find_hom(a, b);
      CHECK(h.has_value() == oracle_hom(a, b));
      if (h) CHECK(oracle_preserves(a, b, h->map));
      auto inj = find_hom(a, b, HomKind::Injective);
      CHECK(inj.has_value() == oracle_hom(a, b, true));
      CHECK(isomorphic(a, b) == oracle_isomorphic(a, b));
    }
}

TEST_CASE("hom_preorder is transitive") {
  auto sig = sig_of(kPQ);
  auto models = random_models(sig, 12, 3, 4);
  for (const auto& a : models)
    for (const auto& b : models)
      for (const auto& c : models)
        if (find_hom(a, b) && find_hom(b, c)) CHECK(find_hom(a, c).has_value());
}

TEST_CASE("characteristic sentences match the hom oracle") {
  auto sig = sig_of("(declare-sort S 0)(declare-fun f (S) S)(declare-fun P (S) Bool)");
  auto models = random_models(sig, 16, 3, 5);
  for (const auto& m : models)
    for (const auto& n : models) {
      CHECK(eval(n, characteristic_sentence(m)) == oracle_hom(m, n));
      CHECK(eval(n, i_characteristic_sentence(m)) == oracle_hom(m, n, true));
    }
}

TEST_CASE("homTo clauses for one-element targets") {
  auto sig = sig_of("(declare-sort S 0)(declare-fun P (S) Bool)");
  FiniteModel yes(sig, {{"S", 1}});
  yes.set_predicate("P", Tuple{0}, true);
  auto to = hom_to_sentence(yes);
  auto x0 = Term::var("x0", "S");
  auto hx = Term::app("@hom!S", {x0}, "@tgt!S");
  auto clause = Formula::forall({{"x0", "S"}}, Formula::implies(Formula::pred("P", {x0}),
                                                               Formula::eq(hx, Term::constant("@tgt!S!1", "@tgt!S"))));
  REQUIRE(to.sentence.is(Formula::Kind::And));
  CHECK(to.sentence.children().back() == clause);

  FiniteModel no(sig, {{"S", 1}});
  auto empty = hom_to_sentence(no);
  CHECK(empty.sentence.children().back() ==
        Formula::forall({{"x0", "S"}}, Formula::implies(Formula::pred("P", {x0}), Formula::falsity())));
  CHECK(empty.extension.has_symbol("@hom!S"));
  CHECK(empty.extension.is_uninterpreted("@tgt!S"));
}

TEST_CASE("homTo, homFrom and avoid agree with the oracle through the solver") {
  auto sig = sig_of("(declare-sort S 0)(declare-fun f (S) S)(declare-fun P (S) Bool)");
  auto models = random_models(sig, 7, 3, 6);
  for (const auto& p : models)
    for (const auto& m : models) {
      auto to = hom_to_sentence(m);
      CHECK(sat_with_diagram(p, to.sentence, to.extension) == oracle_hom(p, m));
      CHECK(sat_with_diagram(p, hom_from_sentence(m), Signature{}) == oracle_hom(m, p));
      CHECK(sat_with_diagram(p, avoid_sentence(m), Signature{}) == !oracle_hom(m, p));
    }
}

TEST_CASE("rep sentence of the cycle example") {
  auto m = cycle_model();
  auto rep = rep_sentence(m);
  REQUIRE(rep.is(Formula::Kind::Exists));
  CHECK(rep.bound().size() == 3);
  CHECK(conjunct_texts(rep.body()) ==
        std::set<std::string>{"(= (f x0) x2)", "(= (f x1) x0)", "(= (f x2) x1)", "(= c x2)"});
  // Body order: the function rules then the constant.
  CHECK(print_formula(rep.body().children()[0]) == "(= (f x0) x2)");
  CHECK(print_formula(rep.body().children()[3]) == "(= c x2)");
}

TEST_CASE("compressing the cycle example in the given order") {
  auto out = compress_hom_from(rep_sentence(cycle_model()), EliminationOrder::Given);
  CHECK(out.residual_variables == 1);
  REQUIRE(out.formula.is(Formula::Kind::Exists));
  CHECK(out.formula.bound()[0].name == "x1");
  CHECK(conjunct_texts(out.formula.body()) == std::set<std::string>{"(= (f (f (f x1))) x1)", "(= c (f (f x1)))"});
  CHECK(out.trace == std::vector<std::string>{"x2 := (f x0)", "x0 := (f x1)"});
}

TEST_CASE("compressing the cycle example from graph sources") {
  auto out = compress_hom_from(rep_sentence(cycle_model()), EliminationOrder::GraphSource);
  CHECK(out.residual_variables == 0);
  CHECK(print_formula(out.formula) == "(= (f (f (f c))) c)");
  CHECK(out.trace == std::vector<std::string>{"x2 := c", "x1 := (f c)", "x0 := (f (f c))"});
}

TEST_CASE("one element with no facts") {
  auto sig = sig_of("(declare-sort S 0)(declare-const c S)");
  FiniteModel m(sig, {{"S", 1}});
  CHECK(print_formula(rep_sentence(m)) == "(exists ((x0 S)) (= c x0))");
  CHECK(print_formula(hom_from_sentence(m)) == "true");
}

TEST_CASE("compression preserves meaning and never adds quantifiers") {
  auto sig = sig_of("(declare-sort S 0)(declare-fun f (S) S)(declare-fun g (S) S)(declare-const c S)(declare-fun P (S) Bool)");
  auto models = random_models(sig, 25, 3, 8);
  auto targets = random_models(sig, 25, 3, 9);
  for (const auto& m : models) {
    auto rep = rep_sentence(m);
    for (auto order : {EliminationOrder::Given, EliminationOrder::GraphSource}) {
      auto out = compress_hom_from(rep, order);
      CHECK(out.residual_variables <= rep.bound().size());
      for (const auto& p : targets) CHECK(oracle_holds(p, out.formula) == oracle_holds(p, rep));
    }
  }
}

TEST_CASE("models named by closed terms compress to no quantifiers") {
  auto sig = sig_of("(declare-sort S 0)(declare-fun f (S) S)(declare-const c S)(declare-fun P (S) Bool)");
  std::mt19937 rng(10);
  int reachable_cases = 0;
  for (int i = 0; i < 60; ++i) {
    auto m = random_model(sig, {{"S", 1 + static_cast<int>(rng() % 4)}}, rng);
    // Elements reachable from c under f.
    std::set<Element> seen;
    for (Element e = m.apply("c", Tuple{}); seen.insert(e).second;) e = m.apply("f", Tuple{e});
    auto out = compress_hom_from(rep_sentence(m), EliminationOrder::GraphSource);
    if (static_cast<int>(seen.size()) == m.size("S")) {
      ++reachable_cases;
      CHECK(out.residual_variables == 0);
    } else {
      CHECK(out.residual_variables > 0);
    }
  }
  CHECK(reachable_cases > 5);
}

TEST_CASE("avoid of the all-false one-element model is unsatisfiable") {
  auto sig = sig_of(kPQ);
  FiniteModel bottom(sig, {{"S", 1}});
  auto avoid = avoid_sentence(bottom);
  for (int n = 1; n <= 3; ++n)
    for_each_interpretation(sig, {{"S", n}}, [&](const FiniteModel& b) { CHECK_FALSE(oracle_holds(b, avoid)); });
  FiniteModel no_p(sig, {{"S", 2}});
  no_p.set_predicate("Q", Tuple{1}, true);
  CHECK(oracle_holds(no_p, avoid_sentence(pq_one(sig))));
}

TEST_CASE("flip sentences") {
  auto sig = sig_of("(declare-sort S 0)(declare-fun P (S) Bool)");
  FiniteModel p(sig, {{"S", 2}});
  p.set_predicate("P", Tuple{0}, true);
  auto flip = flip_sentence(p);
  auto text = conjunct_texts(flip);
  CHECK(text == std::set<std::string>{"(not (P |@S!2|))", "(not (= |@S!1| |@S!2|))", "(not (P |@S!1|))"});

  FiniteModel empty(sig, {{"S", 2}});
  auto none = flip_sentence(empty);
  REQUIRE(none.is(Formula::Kind::And));
  CHECK(none.children().back().is(Formula::Kind::False));

  // Aliases are pinned to their element.
  p.add_alias("@S!3", "S", 1);
  CHECK(conjunct_texts(flip_sentence(p)).count("(= |@S!3| |@S!2|)") == 1);
  CHECK(flip_signature(p).has_symbol("@S!3"));
}

TEST_CASE("ehom sentences") {
  auto sig = sig_of(kPQ);
  auto sat = [&](const FiniteModel& m) { return sat_with_diagram(m, ehom_sentence(m), endo_signature(m)); };
  FiniteModel both(sig, {{"S", 2}});
  both.set_predicate("P", Tuple{0}, true);
  both.set_predicate("P", Tuple{1}, true);
  CHECK(sat(both));
  CHECK(oracle_has_collapsing_endo(both));
  CHECK_FALSE(sat(pq_split(sig)));
  CHECK_FALSE(oracle_has_collapsing_endo(pq_split(sig)));
  CHECK_FALSE(sat(pq_one(sig)));
  for (const auto& m : random_models(sig_of("(declare-sort S 0)(declare-fun f (S) S)(declare-fun P (S) Bool)"), 12, 3, 12))
    CHECK(sat(m) == oracle_has_collapsing_endo(m));
}
