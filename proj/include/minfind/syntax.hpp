#pragma once

#include <string>
#include <string_view>

#include "minfind/logic.hpp"
#include "minfind/sexpr.hpp"

namespace minfind {

struct ParseOptions {
  /// Accept symbols with the reserved '@' prefix and mark them generated.
  /// Needed when reading back text this library printed.
  bool allow_reserved = false;
};

/// Parses the accepted SMT-LIB 2.6 subset: declare-sort (arity 0),
/// declare-fun, declare-const, assert. set-logic, set-info, set-option,
/// check-sat and exit are accepted and ignored.
Theory parse_theory(std::string_view text, const ParseOptions& options = {});

/// Parses one formula against `sig` (free variables are an error).
Formula parse_formula(std::string_view text, const Signature& sig, const ParseOptions& options = {});
/// Parses one closed term against `sig`.
Term parse_term(std::string_view text, const Signature& sig, const ParseOptions& options = {});

/// `name` as an SMT-LIB symbol, in |bars| unless it is a plain simple symbol.
std::string quote_symbol(std::string_view name);
std::string print_term(const Term& t);
std::string print_formula(const Formula& f);

/// Declarations for every sort and symbol of `sig` in declaration order.
std::string print_declarations(const Signature& sig);
/// The whole theory as an SMT-LIB script (declarations then one assert per axiom).
std::string to_term_form(const Theory& t);
/// Inverse of to_term_form: reserved symbols are allowed and bounding
/// constants and covering axioms are recognised again.
Theory from_term_form(std::string_view text);

}  // namespace minfind
