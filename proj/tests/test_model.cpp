#include <random>
#include <set>

#include "doctest.h"
#include "minfind/diagram.hpp"
#include "minfind/error.hpp"
#include "minfind/model_io.hpp"
#include "minfind/rewrite.hpp"
#include "minfind/solver.hpp"
#include "minfind/syntax.hpp"
#include "oracle.hpp"

using namespace minfind;
using namespace minfind::testing;

namespace {

std::shared_ptr<const Signature> sig_of(const std::string& decls) {
  return std::make_shared<const Signature>(parse_theory(decls).signature);
}

FiniteModel scrape_first(const Theory& t, const Profile& p) {
  auto bounded = bound_theory(t, p);
  SolverSession s(test_solver(), bounded.signature);
  s.assert_formulas(bounded.formulas());
  REQUIRE(s.check_sat() == SatResult::Sat);
  return scrape_model(s, std::make_shared<const Signature>(bounded.user_signature()),
                      {bounded.bounding.begin(), bounded.bounding.end()});
}

// All ground terms up to `depth` nested function applications over the
// model's naming constants and the user constants.
std::vector<Term> ground_terms(const FiniteModel& m, int depth) {
  std::map<std::string, std::vector<Term>> by_sort;
  for (const auto& s : m.sorts())
    for (const auto& c : m.naming_constants(s)) by_sort[s].push_back(Term::constant(c, s));
  for (const auto& d : m.signature().functions())
    if (d.args.empty()) by_sort[d.result].push_back(Term::constant(d.name, d.result));
  for (int level = 0; level < depth; ++level) {
    auto next = by_sort;
    for (const auto& d : m.signature().functions()) {
      if (d.args.empty()) continue;
      std::vector<std::vector<Term>> tuples{{}};
      for (const auto& a : d.args) {
        std::vector<std::vector<Term>> grown;
        for (const auto& prefix : tuples)
          for (const auto& t : by_sort[a]) {
            auto x = prefix;
            x.push_back(t);
            grown.push_back(std::move(x));
          }
        tuples = std::move(grown);
      }
      for (auto& args : tuples) {
        bool new_depth = false;
        for (const auto& a : args) new_depth = new_depth || static_cast<int>(a.size()) > level;
        if (level == 0 || new_depth) next[d.result].push_back(Term::app(d.name, args, d.result));
      }
    }
    by_sort = std::move(next);
  }
  std::vector<Term> out;
  for (auto& [s, ts] : by_sort) out.insert(out.end(), ts.begin(), ts.end());
  return out;
}

Element oracle_term(const FiniteModel& m, const Term& t) {
  if (t.args().empty() && !m.signature().has_symbol(t.name())) return m.named(t.name())->element;
  Tuple args;
  for (const auto& a : t.args()) args.push_back(oracle_term(m, a));
  return m.apply(t.name(), args);
}

}  // namespace

TEST_CASE("scraping a forced one-element model") {
  auto t = parse_theory("(declare-sort S 0)(declare-const c S)(declare-fun P (S) Bool)(assert (P c))");
  auto m = scrape_first(t, Profile({{"S", 1}}));
  CHECK(m.size("S") == 1);
  CHECK(m.holds("P", Tuple{0}));
  CHECK(m.element_names("S") == std::vector<std::string>{"@S!1"});
}

TEST_CASE("scraping forced distinct constants") {
  auto t = parse_theory("(declare-sort S 0)(declare-const a S)(declare-const b S)(assert (not (= a b)))");
  auto m = scrape_first(t, Profile({{"S", 2}}));
  CHECK(m.size("S") == 2);
  CHECK(m.apply("a", Tuple{}) != m.apply("b", Tuple{}));
}

TEST_CASE("scraped corpus models satisfy their axioms under both evaluators") {
  for (const auto& e : load_corpus()) {
    CAPTURE(e.name);
    if (bounded_models(e.theory, e.profile).empty()) continue;
    auto m = scrape_first(e.theory, e.profile);
    for (const auto& a : e.theory.axioms) {
      CHECK(eval(m, a.formula));
      CHECK(oracle_holds(m, a.formula));
    }
    // Every bounded element is named by some inventory constant.
    for (const auto& s : m.sorts()) {
      std::set<Element> named;
      for (const auto& c : m.naming_constants(s)) named.insert(m.named(c)->element);
      CHECK(static_cast<int>(named.size()) == m.size(s));
    }
    auto bounded = bound_theory(e.theory, e.profile);
    for (const auto& a : bounded.axioms) CHECK(eval(m, a.formula));
  }
}

TEST_CASE("eval examples") {
  auto sig = sig_of("(declare-sort S 0)(declare-fun P (S) Bool)");
  FiniteModel m(sig, {{"S", 1}});
  m.set_predicate("P", Tuple{0}, true);
  CHECK(eval(m, parse_formula("(exists ((x S)) (P x))", *sig)));
  CHECK_FALSE(eval(m, parse_formula("(forall ((x S)) (not (P x)))", *sig)));
  CHECK_THROWS_AS(eval(m, Formula::pred("Q", {})), ModelError);
}

TEST_CASE("eval agrees with the independent evaluator on random models") {
  std::mt19937 rng(7);
  for (const auto& e : load_corpus()) {
    auto sig = std::make_shared<const Signature>(e.theory.user_signature());
    for (int i = 0; i < 20; ++i) {
      std::map<std::string, int> sizes;
      for (const auto& [s, n] : e.profile.bounds()) sizes[s] = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
      auto m = random_model(sig, sizes, rng);
      for (const auto& a : e.theory.axioms) CHECK(eval(m, a.formula) == oracle_holds(m, a.formula));
    }
  }
}

TEST_CASE("reduct") {
  auto sig = sig_of("(declare-sort S 0)(declare-fun P (S) Bool)(declare-fun f (S) S)");
  std::mt19937 rng(3);
  auto m = random_model(sig, {{"S", 3}}, rng);
  CHECK(reduct(m, *sig) == m);
  Signature small;
  small.add_sort("S");
  small.add_predicate("P", {"S"});
  auto r = reduct(m, small);
  CHECK(r.size("S") == 3);
  CHECK(r.signature().function("f") == nullptr);
  for (Element e = 0; e < 3; ++e) CHECK(r.holds("P", Tuple{e}) == m.holds("P", Tuple{e}));
  Signature other;
  other.add_sort("T");
  CHECK_THROWS_AS(reduct(m, other), ModelError);
}

TEST_CASE("reduct of a scraped bounded model satisfies the theory") {
  for (const auto& e : load_corpus()) {
    if (bounded_models(e.theory, e.profile).empty()) continue;
    auto m = scrape_first(e.theory, e.profile);
    auto r = reduct(m, e.theory.signature);
    CHECK(oracle_satisfies(r, e.theory));
  }
}

TEST_CASE("rewrite representation of the smallest nontrivial case") {
  auto sig = sig_of("(declare-sort S 0)(declare-fun f (S) S)");
  FiniteModel m(sig, {{"S", 1}});
  m.set_element_names("S", {"@S!1"});
  m.add_alias("@S!2", "S", 0);
  m.set_function("f", Tuple{0}, 0);
  auto rep = to_rewrite_rep(m);
  CHECK(rep.d_rules == std::vector<DRule>{{"@S!2", "@S!1"}});
  CHECK(rep.c_rules == std::vector<CRule>{{"f", {"@S!1"}, "@S!1"}});
  CHECK(rep.is_self_reduced());
}

TEST_CASE("already canonical models have no D-rules") {
  auto sig = sig_of("(declare-sort S 0)(declare-fun f (S) S)(declare-fun P (S) Bool)");
  std::mt19937 rng(11);
  auto m = random_model(sig, {{"S", 3}}, rng);
  auto rep = to_rewrite_rep(m);
  CHECK(rep.d_rules.empty());
  CHECK(rep.c_rules.size() == 3);
  CHECK(rep.canonical_constants().size() == 3);
}

TEST_CASE("completion orients and inter-reduces") {
  TermOrder order({"a", "b", "c"}, {"f"});
  // c = b, f(c) = c, b = a: everything collapses onto a.
  auto rep = complete({{FlatTerm::constant("c"), FlatTerm::constant("b")},
                       {FlatTerm::apply("f", {"c"}), FlatTerm::constant("c")},
                       {FlatTerm::constant("b"), FlatTerm::constant("a")}},
                      order);
  CHECK(rep.d_rules == std::vector<DRule>{{"b", "a"}, {"c", "a"}});
  CHECK(rep.c_rules == std::vector<CRule>{{"f", {"a"}, "a"}});
  CHECK(rep.is_self_reduced());
  CHECK_THROWS_AS(complete({{FlatTerm::apply("f", {"a"}), FlatTerm::apply("f", {"b"})}}, order), ModelError);
}

TEST_CASE("normal forms decide element equality for random models with aliases") {
  auto sig = sig_of("(declare-sort S 0)(declare-sort T 0)(declare-fun f (S) S)(declare-fun g (S) T)(declare-const c S)");
  std::mt19937 rng(5);
  for (int i = 0; i < 30; ++i) {
    auto m = random_model(sig, {{"S", 1 + static_cast<int>(rng() % 3)}, {"T", 1 + static_cast<int>(rng() % 2)}}, rng);
    for (int k = 1; k <= 2; ++k) {
      m.add_alias("@S!x" + std::to_string(k), "S", static_cast<Element>(rng() % static_cast<unsigned>(m.size("S"))));
    }
    auto rep = to_rewrite_rep(m);
    CHECK(rep.is_self_reduced());
    auto terms = ground_terms(m, 2);
    for (const auto& a : terms)
      for (const auto& b : terms)
        if (a.sort() == b.sort()) CHECK((rep.normalize(a) == rep.normalize(b)) == (oracle_term(m, a) == oracle_term(m, b)));
  }
}

TEST_CASE("diagram and characteristic sentences") {
  auto sig = sig_of("(declare-sort S 0)(declare-fun P (S) Bool)(declare-fun f (S) S)");
  FiniteModel one(sig, {{"S", 1}});
  one.set_predicate("P", Tuple{0}, true);
  auto x0 = Term::var("x0", "S");
  auto expected = Formula::exists({{"x0", "S"}}, Formula::conj({Formula::pred("P", {x0}),
                                                                Formula::eq(Term::app("f", {x0}, "S"), x0)}));
  CHECK(characteristic_sentence(one) == expected);

  FiniteModel two(sig, {{"S", 2}});
  two.set_predicate("P", Tuple{0}, true);
  auto ich = i_characteristic_sentence(two);
  auto x1 = Term::var("x1", "S");
  auto body = ich.body();
  REQUIRE(body.is(Formula::Kind::And));
  CHECK(body.children().back() == Formula::negate(Formula::eq(x0, x1)));

  auto d = diagram(two);
  for (const auto& p : d.positive)
    for (const auto& n : d.negative) CHECK_FALSE(p == n);
  // f graph: 2 positive + 2 negative; P: 1 + 1; one disequality.
  CHECK(d.positive.size() == 3);
  CHECK(d.negative.size() == 4);
  CHECK(eval(two, closed_diagram(two)));
}

TEST_CASE("model json round trip and text listing") {
  std::mt19937 rng(9);
  for (const auto& e : load_corpus()) {
    auto sig = std::make_shared<const Signature>(e.theory.user_signature());
    std::map<std::string, int> sizes;
    for (const auto& [s, n] : e.profile.bounds()) sizes[s] = n;
    auto m = random_model(sig, sizes, rng);
    auto j = model_to_json(m);
    auto back = model_from_json(nlohmann::json::parse(j.dump()), sig);
    CHECK(back == m);
    CHECK(model_to_json(back).dump() == j.dump());
    CHECK(model_to_text(m) == model_to_text(back));
  }
  auto sig = sig_of("(declare-sort S 0)(declare-fun P (S) Bool)");
  CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(R"({"sorts":{"S":["a"]},"funcs":{},"preds":{}})"), sig), ModelError);
  CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(R"({"sorts":{"S":["a"]}})"), sig), ModelError);
}
