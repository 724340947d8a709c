#pragma once

#include <chrono>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "minfind/logic.hpp"
#include "minfind/sexpr.hpp"

namespace minfind {

/// Command log shared by every session of one algorithm run. Commands are
/// stored verbatim; replies are stored as "; " comment lines so the whole
/// log can be replayed into a fresh solver.
class Transcript {
 public:
  void command(std::string_view text);
  void reply(std::string_view text);
  void note(std::string_view text);

  const std::vector<std::string>& lines() const { return lines_; }
  std::string text() const;
  std::size_t count_check_sat() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> lines_;
};

struct SolverConfig {
  /// argv of the solver; the process must read SMT-LIB 2 on stdin.
  std::vector<std::string> command = {"z3", "-in", "-smt2"};
  /// Wall-clock limit for one check-sat.
  std::chrono::milliseconds timeout{60000};
  /// Emitted as (set-logic ...) when non-empty.
  std::string logic;
  std::shared_ptr<Transcript> transcript;
  /// Ground quantifiers over sorts registered with SolverSession::close_sort.
  bool expand_quantifiers = true;

  /// Splits a shell-like command string on whitespace.
  static std::vector<std::string> split_command(std::string_view command);
  void validate() const;
};

enum class SatResult { Sat, Unsat, Unknown };
std::string_view to_string(SatResult r);

/// One conversation with one solver process. Move-only; one owner at a time.
class SolverSession {
 public:
  SolverSession(const SolverConfig& config, const Signature& sig);
  ~SolverSession();
  SolverSession(SolverSession&& other) noexcept;
  SolverSession& operator=(SolverSession&& other) noexcept;
  SolverSession(const SolverSession&) = delete;
  SolverSession& operator=(const SolverSession&) = delete;

  void declare_sort(const std::string& name);
  void declare_symbol(const SymbolDecl& decl);
  /// Declares every sort and symbol of `extra` not yet visible.
  void declare(const Signature& extra);
  /// An enumerated sort: a datatype whose constructors are all nullary.
  void declare_enum_sort(const std::string& name, const std::vector<std::string>& values);

  /// Declares that `constants` cover `sort` from now on (its covering axiom
  /// is already asserted). Later assertions quantify over it by instances.
  void close_sort(const std::string& sort, std::vector<std::string> constants);

  void assert_formula(const Formula& f);
  void assert_formulas(std::span<const Formula> fs);
  void push();
  void pop();

  SatResult check_sat();
  /// True when the last check_sat gave up because of the wall-clock limit.
  bool timed_out() const { return timed_out_; }
  bool alive() const { return pid_ > 0; }

  bool get_value_bool(const Formula& atom);
  /// One get-value command for a whole batch of closed quantifier-free formulas.
  std::vector<bool> get_values_bool(std::span<const Formula> atoms);
  /// Values of closed terms as printed by the solver (symbol text, bars stripped).
  std::vector<std::string> get_values(std::span<const Term> terms);

  std::size_t depth() const { return frames_.size() - 1; }
  const Signature& signature() const { return frames_.back(); }
  std::size_t check_sat_calls() const { return check_sat_calls_; }
  std::size_t get_value_calls() const { return get_value_calls_; }

 private:
  SExpr send(const std::string& command, std::chrono::milliseconds limit);
  void expect_success(const std::string& command);
  std::vector<SExpr> value_pairs(const std::string& terms, std::size_t expected);
  void require_model() const;
  void kill();
  void close();

  int pid_ = -1;
  int to_solver_ = -1;
  int from_solver_ = -1;
  std::string buffer_;
  std::chrono::milliseconds timeout_;
  std::shared_ptr<Transcript> transcript_;
  std::vector<Signature> frames_;
  std::size_t check_sat_calls_ = 0;
  std::size_t get_value_calls_ = 0;
  bool model_available_ = false;
  bool timed_out_ = false;
  bool expand_ = true;
  std::map<std::string, std::vector<std::string>> domains_;
};

}  // namespace minfind
