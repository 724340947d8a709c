#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace minfind {

inline constexpr std::string_view kBoolSort = "Bool";
/// Prefix shared by every symbol the library generates; rejected in user input.
inline constexpr char kReservedPrefix = '@';

/// A function or predicate declaration. Predicates have result sort Bool;
/// constants are functions with no arguments.
struct SymbolDecl {
  std::string name;
  std::vector<std::string> args;
  std::string result;
  bool generated = false;

  bool is_predicate() const { return result == kBoolSort; }
  bool operator==(const SymbolDecl&) const = default;
};

/// Many-sorted signature over uninterpreted sorts plus the builtin Bool.
/// Symbols keep declaration order so every derived output is deterministic.
class Signature {
 public:
  void add_sort(const std::string& name, bool generated = false);
  void add_symbol(SymbolDecl decl);
  void add_function(const std::string& name, std::vector<std::string> args, const std::string& result,
                    bool generated = false) {
    add_symbol({name, std::move(args), result, generated});
  }
  void add_predicate(const std::string& name, std::vector<std::string> args, bool generated = false) {
    add_symbol({name, std::move(args), std::string(kBoolSort), generated});
  }

  bool has_sort(std::string_view name) const;
  bool is_uninterpreted(std::string_view name) const;
  bool is_generated_sort(std::string_view name) const;
  bool has_symbol(std::string_view name) const { return find(name) != nullptr; }
  const SymbolDecl* find(std::string_view name) const;
  const SymbolDecl* function(std::string_view name) const;
  const SymbolDecl* predicate(std::string_view name) const;

  /// Uninterpreted sorts in declaration order.
  const std::vector<std::string>& sorts() const { return sorts_; }
  /// All symbols (functions and predicates) in declaration order.
  const std::vector<SymbolDecl>& symbols() const { return symbols_; }
  std::vector<SymbolDecl> functions() const;
  std::vector<SymbolDecl> predicates() const;

  /// The signature with every generated sort and symbol removed.
  Signature user_part() const;
  bool is_subsignature_of(const Signature& other) const;
  /// Symbols and sorts of `other` not present here, in `other`'s order.
  Signature difference(const Signature& other) const;
  void merge(const Signature& other);

  bool operator==(const Signature& other) const {
    return sorts_ == other.sorts_ && generated_sorts_ == other.generated_sorts_ && symbols_ == other.symbols_;
  }

 private:
  std::vector<std::string> sorts_;
  std::set<std::string> generated_sorts_;
  std::vector<SymbolDecl> symbols_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// Immutable first-order term: a sorted variable or a function application.
class Term {
 public:
  enum class Kind { Var, App };

  static Term var(std::string name, std::string sort);
  static Term app(std::string symbol, std::vector<Term> args, std::string sort);
  static Term constant(std::string symbol, std::string sort) { return app(std::move(symbol), {}, std::move(sort)); }

  Kind kind() const;
  bool is_var() const { return kind() == Kind::Var; }
  const std::string& name() const;
  const std::string& sort() const;
  std::span<const Term> args() const;

  bool operator==(const Term& other) const;
  bool operator<(const Term& other) const;
  std::size_t size() const;

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Binding {
  std::string name;
  std::string sort;
  bool operator==(const Binding&) const = default;
  auto operator<=>(const Binding&) const = default;
};

/// Immutable formula tree. Atoms are predicate applications, equalities,
/// true and false; connectives are and, or, not, implies, exists, forall.
class Formula {
 public:
  enum class Kind { True, False, Pred, Eq, And, Or, Not, Implies, Exists, Forall };

  static Formula truth();
  static Formula falsity();
  static Formula pred(std::string name, std::vector<Term> args = {});
  static Formula eq(Term lhs, Term rhs);
  /// Flattening constructors: an empty conjunction is true, a singleton is its element.
  static Formula conj(std::vector<Formula> parts);
  static Formula disj(std::vector<Formula> parts);
  static Formula negate(Formula f);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula exists(std::vector<Binding> vars, Formula body);
  static Formula forall(std::vector<Binding> vars, Formula body);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }
  bool is_atom() const;
  /// Predicate name for Pred atoms.
  const std::string& name() const;
  /// Predicate arguments, or {lhs, rhs} for Eq.
  std::span<const Term> terms() const;
  std::span<const Formula> children() const;
  const Formula& body() const { return children()[0]; }
  std::span<const Binding> bound() const;

  bool operator==(const Formula& other) const;
  std::size_t size() const;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

std::set<std::string> free_variables(const Term& t);
std::set<std::string> free_variables(const Formula& f);
bool occurs(const std::string& var, const Term& t);

/// Capture-avoiding substitution of terms for free variables.
Term substitute(const Term& t, const std::map<std::string, Term>& sub);
Formula substitute(const Formula& f, const std::map<std::string, Term>& sub);
/// Replaces each quantifier over a sort listed in `domains` by the
/// conjunction (forall) or disjunction (exists) of its instances at the
/// listed constants. Equivalent to `f` wherever those constants cover their sorts.
Formula expand_quantifiers(const Formula& f, const std::map<std::string, std::vector<std::string>>& domains);

/// Structural equality up to consistent renaming of bound variables.
bool alpha_equivalent(const Formula& a, const Formula& b);

/// Positive-existential: atoms (including true/false) under and, or, exists.
bool is_pe(const Formula& f);
/// Every axiom has the shape forall xs. alpha -> beta with alpha, beta PE.
/// A bare PE body counts with alpha = true; "not alpha" counts as alpha -> false.
bool is_geometric_axiom(const Formula& f);

/// Checks sorts of every subterm against `sig`; `scope` supplies variable sorts.
void check_well_sorted(const Formula& f, const Signature& sig);

enum class Provenance { User, Bounding, Avoid, HomTo, Flip };
std::string_view to_string(Provenance p);

struct Axiom {
  Formula formula;
  Provenance provenance = Provenance::User;
};

/// Signature plus closed axioms. A bounded theory also records, per sort,
/// the generated constants that name every element.
struct Theory {
  Signature signature;
  std::vector<Axiom> axioms;
  std::map<std::string, std::vector<std::string>> bounding;

  bool is_bounded() const { return !bounding.empty(); }
  Signature user_signature() const { return signature.user_part(); }
  std::vector<Formula> formulas() const;
  /// Uninterpreted sorts that occur in a symbol rank or a quantifier.
  std::set<std::string> used_sorts() const;
  /// Signature and axiom formulas equal; provenance is metadata and not compared.
  bool same_as(const Theory& other) const;
};

bool is_geometric(const Theory& t);

/// Per-sort positive size bounds.
class Profile {
 public:
  Profile() = default;
  explicit Profile(std::map<std::string, int> bounds);
  /// The same bound at every uninterpreted sort of `sig`.
  static Profile uniform(const Signature& sig, int bound);

  void set(const std::string& sort, int bound);
  std::optional<int> bound(const std::string& sort) const;
  const std::map<std::string, int>& bounds() const { return bounds_; }
  void validate_against(const Signature& sig) const;

 private:
  std::map<std::string, int> bounds_;
};

/// Name of the i-th (1-based) element-naming constant of `sort`.
std::string fresh_constant_name(std::string_view sort, int index);
std::string hom_symbol_name(std::string_view sort);
std::string target_sort_name(std::string_view sort);
std::string target_constant_name(std::string_view sort, int index);
/// Constructor of the i-th value when `sort` is turned into an enumerated type.
std::string enum_value_name(std::string_view sort, int index);

/// Adds, for each bounded sort S with bound n, constants @S!1..@S!n and the
/// covering axiom forall x:S. x = @S!1 or ... or x = @S!n.
Theory bound_theory(const Theory& t, const Profile& p);

/// Covering axiom over the given constants.
Formula domain_closure(const std::string& sort, std::span<const std::string> constants);

}  // namespace minfind
