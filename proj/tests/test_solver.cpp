#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "minfind/error.hpp"
#include "minfind/solver.hpp"
#include "minfind/syntax.hpp"
#include "oracle.hpp"

using namespace minfind;
using namespace minfind::testing;

namespace {

Signature small_signature() {
  Signature sig;
  sig.add_sort("S");
  sig.add_predicate("P", {"S"});
  sig.add_function("c", {}, "S");
  return sig;
}

Formula f(const std::string& text, const Signature& sig) { return parse_formula(text, sig); }

}  // namespace

TEST_CASE("a fresh session has made no checks and sits at depth 0") {
  SolverSession s(test_solver(), small_signature());
  CHECK(s.check_sat_calls() == 0);
  CHECK(s.depth() == 0);
  CHECK(s.alive());
}

TEST_CASE("a missing solver binary is a spawn error") {
  SolverConfig cfg;
  cfg.command = {"/nonexistent/solver-binary"};
  CHECK_THROWS_AS(SolverSession(cfg, small_signature()), SolverError);
}

TEST_CASE("config validation") {
  SolverConfig cfg = test_solver();
  cfg.timeout = std::chrono::milliseconds(0);
  CHECK_THROWS(cfg.validate());
  CHECK(SolverConfig::split_command("z3  -in -smt2") == std::vector<std::string>{"z3", "-in", "-smt2"});
}

TEST_CASE("fifty symbols are all declared") {
  Signature sig;
  sig.add_sort("S");
  for (int i = 0; i < 50; ++i) sig.add_predicate("P" + std::to_string(i), {"S"});
  auto transcript = std::make_shared<Transcript>();
  auto cfg = test_solver();
  cfg.transcript = transcript;
  SolverSession s(cfg, sig);
  CHECK(s.depth() == 0);
  std::size_t decls = 0;
  for (const auto& line : transcript->lines())
    if (line.rfind("(declare-fun", 0) == 0) ++decls;
  CHECK(decls == 50);
  CHECK(s.signature().symbols().size() == 50);
}

TEST_CASE("assert, push and pop") {
  auto sig = small_signature();
  SolverSession s(test_solver(), sig);
  s.assert_formula(Formula::truth());
  CHECK_THROWS_AS(s.pop(), SolverError);
  s.push();
  CHECK(s.depth() == 1);
  s.assert_formula(Formula::falsity());
  CHECK(s.check_sat() == SatResult::Unsat);
  s.pop();
  CHECK(s.depth() == 0);
  CHECK(s.check_sat() == SatResult::Sat);
  CHECK(s.check_sat_calls() == 2);
}

TEST_CASE("check-sat verdicts") {
  auto sig = small_signature();
  SolverSession s(test_solver(), sig);
  s.assert_formula(f("(exists ((x S)) (= x x))", sig));
  CHECK(s.check_sat() == SatResult::Sat);
  s.assert_formula(Formula::falsity());
  CHECK(s.check_sat() == SatResult::Unsat);
}

TEST_CASE("corpus theories the enumerator finds satisfiable are sat in the solver") {
  for (const auto& e : load_corpus()) {
    CAPTURE(e.name);
    auto bounded = bound_theory(e.theory, e.profile);
    SolverSession s(test_solver(), bounded.signature);
    s.assert_formulas(bounded.formulas());
    bool oracle_sat = !bounded_models(e.theory, e.profile).empty();
    CHECK(s.check_sat() == (oracle_sat ? SatResult::Sat : SatResult::Unsat));
  }
}

TEST_CASE("push, assert, pop leaves the verdict unchanged") {
  for (const auto& e : load_corpus()) {
    CAPTURE(e.name);
    auto bounded = bound_theory(e.theory, e.profile);
    SolverSession s(test_solver(), bounded.signature);
    s.assert_formulas(bounded.formulas());
    auto before = s.check_sat();
    s.push();
    s.assert_formula(Formula::falsity());
    CHECK(s.check_sat() == SatResult::Unsat);
    s.pop();
    CHECK(s.check_sat() == before);
    CHECK(s.check_sat() == before);
  }
}

TEST_CASE("get-value on boolean atoms") {
  auto sig = small_signature();
  SolverSession s(test_solver(), sig);
  CHECK_THROWS_AS(s.get_value_bool(f("(P c)", sig)), SolverError);
  s.assert_formula(f("(P c)", sig));
  REQUIRE(s.check_sat() == SatResult::Sat);
  CHECK(s.get_value_bool(f("(P c)", sig)));
  CHECK(s.get_value_bool(f("(= c c)", sig)));
  CHECK(s.get_value_calls() == 2);
  auto both = s.get_values_bool(std::vector<Formula>{f("(P c)", sig), f("(not (P c))", sig)});
  CHECK(both == std::vector<bool>{true, false});
}

TEST_CASE("timeouts are reported as unknown with a flag") {
  // Pigeonhole with 9 pigeons in 8 holes is slow enough to exceed 1 ms.
  Signature sig;
  sig.add_sort("P");
  sig.add_sort("H");
  sig.add_function("hole", {"P"}, "H");
  std::string text = "(declare-sort P 0)(declare-sort H 0)(declare-fun hole (P) H)";
  for (int i = 0; i < 9; ++i) text += "(declare-const p" + std::to_string(i) + " P)";
  for (int i = 0; i < 8; ++i) text += "(declare-const h" + std::to_string(i) + " H)";
  text += "(assert (distinct";
  for (int i = 0; i < 9; ++i) text += " p" + std::to_string(i);
  text += "))(assert (forall ((x H)) (or";
  for (int i = 0; i < 8; ++i) text += " (= x h" + std::to_string(i) + ")";
  text += ")))(assert (forall ((x P) (y P)) (=> (= (hole x) (hole y)) (= x y))))";
  auto t = parse_theory(text);
  SolverSession s(test_solver(std::chrono::milliseconds(1)), t.signature);
  s.assert_formulas(t.formulas());
  auto r = s.check_sat();
  if (r == SatResult::Unknown) {
    CHECK(s.timed_out());
    CHECK_FALSE(s.alive());
  } else {
    MESSAGE("solver finished within 1 ms; timeout path not exercised");
    CHECK(r == SatResult::Unsat);
  }
}

TEST_CASE("the transcript replays to the same verdicts and counts check-sat lines") {
  auto e = load_corpus_entry("pq_split");
  auto bounded = bound_theory(e.theory, e.profile);
  auto transcript = std::make_shared<Transcript>();
  auto cfg = test_solver();
  cfg.transcript = transcript;
  std::vector<SatResult> verdicts;
  std::size_t calls = 0;
  {
    SolverSession s(cfg, bounded.signature);
    s.assert_formulas(bounded.formulas());
    verdicts.push_back(s.check_sat());
    s.push();
    s.assert_formula(Formula::falsity());
    verdicts.push_back(s.check_sat());
    s.pop();
    verdicts.push_back(s.check_sat());
    calls = s.check_sat_calls();
  }
  CHECK(transcript->count_check_sat() == calls);

  auto path = std::filesystem::temp_directory_path() / "minfind_replay.smt2";
  transcript->write(path.string());
  std::string cmd = std::string(MINFIND_TEST_Z3) + " -smt2 " + path.string();
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[256];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) out += buf;
  ::pclose(pipe);
  std::vector<std::string> replayed;
  std::istringstream lines(out);
  for (std::string l; std::getline(lines, l);)
    if (l == "sat" || l == "unsat" || l == "unknown") replayed.push_back(l);
  REQUIRE(replayed.size() == verdicts.size());
  for (std::size_t i = 0; i < verdicts.size(); ++i) CHECK(replayed[i] == std::string(to_string(verdicts[i])));
}
