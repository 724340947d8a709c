#include "minfind/logic.hpp"

#include <algorithm>
#include <functional>

#include "minfind/error.hpp"

namespace minfind {

// ---------------------------------------------------------------- Signature

void Signature::add_sort(const std::string& name, bool generated) {
  if (name == kBoolSort) throw LogicError("sort Bool is builtin");
  if (has_sort(name)) throw LogicError("sort " + name + " declared twice");
  sorts_.push_back(name);
  if (generated) generated_sorts_.insert(name);
}

void Signature::add_symbol(SymbolDecl decl) {
  if (index_.count(decl.name) != 0) throw LogicError("symbol " + decl.name + " declared twice");
  for (const auto& a : decl.args) {
    if (!is_uninterpreted(a)) throw LogicError("symbol " + decl.name + " uses undeclared or non-uninterpreted argument sort " + a);
  }
  if (decl.result != kBoolSort && !is_uninterpreted(decl.result))
    throw LogicError("symbol " + decl.name + " has undeclared result sort " + decl.result);
  index_.emplace(decl.name, symbols_.size());
  symbols_.push_back(std::move(decl));
}

bool Signature::has_sort(std::string_view name) const {
  return name == kBoolSort || is_uninterpreted(name);
}

bool Signature::is_uninterpreted(std::string_view name) const {
  return std::find(sorts_.begin(), sorts_.end(), name) != sorts_.end();
}

bool Signature::is_generated_sort(std::string_view name) const {
  return generated_sorts_.count(std::string(name)) != 0;
}

const SymbolDecl* Signature::find(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &symbols_[it->second];
}

const SymbolDecl* Signature::function(std::string_view name) const {
  const auto* d = find(name);
  return d != nullptr && !d->is_predicate() ? d : nullptr;
}

const SymbolDecl* Signature::predicate(std::string_view name) const {
  const auto* d = find(name);
  return d != nullptr && d->is_predicate() ? d : nullptr;
}

std::vector<SymbolDecl> Signature::functions() const {
  std::vector<SymbolDecl> out;
  for (const auto& d : symbols_)
    if (!d.is_predicate()) out.push_back(d);
  return out;
}

std::vector<SymbolDecl> Signature::predicates() const {
  std::vector<SymbolDecl> out;
  for (const auto& d : symbols_)
    if (d.is_predicate()) out.push_back(d);
  return out;
}

Signature Signature::user_part() const {
  Signature out;
  for (const auto& s : sorts_)
    if (!is_generated_sort(s)) out.add_sort(s);
  for (const auto& d : symbols_)
    if (!d.generated) out.add_symbol(d);
  return out;
}

bool Signature::is_subsignature_of(const Signature& other) const {
  for (const auto& s : sorts_)
    if (!other.is_uninterpreted(s)) return false;
  for (const auto& d : symbols_) {
    const auto* o = other.find(d.name);
    if (o == nullptr || o->args != d.args || o->result != d.result) return false;
  }
  return true;
}

Signature Signature::difference(const Signature& other) const {
  Signature out;
  for (const auto& s : other.sorts_)
    if (!is_uninterpreted(s)) out.add_sort(s, other.is_generated_sort(s));
  // New symbols may range over sorts of this signature, so bypass add_symbol's sort check.
  for (const auto& d : other.symbols_) {
    if (find(d.name) != nullptr) continue;
    out.symbols_.push_back(d);
    out.index_.emplace(d.name, out.symbols_.size() - 1);
  }
  return out;
}

void Signature::merge(const Signature& other) {
  for (const auto& s : other.sorts_)
    if (!is_uninterpreted(s)) add_sort(s, other.is_generated_sort(s));
  for (const auto& d : other.symbols_) {
    const auto* mine = find(d.name);
    if (mine == nullptr) {
      add_symbol(d);
    } else if (mine->args != d.args || mine->result != d.result) {
      throw LogicError("conflicting declarations of " + d.name);
    }
  }
}

// --------------------------------------------------------------------- Term

struct Term::Node {
  Kind kind;
  std::string name;
  std::string sort;
  std::vector<Term> args;
};

Term Term::var(std::string name, std::string sort) {
  return Term(std::make_shared<const Node>(Node{Kind::Var, std::move(name), std::move(sort), {}}));
}

Term Term::app(std::string symbol, std::vector<Term> args, std::string sort) {
  return Term(std::make_shared<const Node>(Node{Kind::App, std::move(symbol), std::move(sort), std::move(args)}));
}

Term::Kind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const std::string& Term::sort() const { return node_->sort; }
std::span<const Term> Term::args() const { return node_->args; }

bool Term::operator==(const Term& other) const {
  if (node_ == other.node_) return true;
  return node_->kind == other.node_->kind && node_->name == other.node_->name &&
         node_->sort == other.node_->sort && node_->args == other.node_->args;
}

bool Term::operator<(const Term& other) const {
  if (node_ == other.node_) return false;
  auto ls = size(), rs = other.size();
  if (ls != rs) return ls < rs;
  if (kind() != other.kind()) return kind() == Kind::Var;
  if (name() != other.name()) return name() < other.name();
  if (sort() != other.sort()) return sort() < other.sort();
  return std::lexicographical_compare(args().begin(), args().end(), other.args().begin(), other.args().end());
}

std::size_t Term::size() const {
  std::size_t n = 1;
  for (const auto& a : args()) n += a.size();
  return n;
}

// ------------------------------------------------------------------ Formula

struct Formula::Node {
  Kind kind;
  std::string name;
  std::vector<Term> terms;
  std::vector<Formula> children;
  std::vector<Binding> bound;
};

Formula Formula::truth() {
  static const Formula t(std::make_shared<const Node>(Node{Kind::True, {}, {}, {}, {}}));
  return t;
}

Formula Formula::falsity() {
  static const Formula f(std::make_shared<const Node>(Node{Kind::False, {}, {}, {}, {}}));
  return f;
}

Formula Formula::pred(std::string name, std::vector<Term> args) {
  return Formula(std::make_shared<const Node>(Node{Kind::Pred, std::move(name), std::move(args), {}, {}}));
}

Formula Formula::eq(Term lhs, Term rhs) {
  return Formula(std::make_shared<const Node>(Node{Kind::Eq, {}, {std::move(lhs), std::move(rhs)}, {}, {}}));
}

Formula Formula::conj(std::vector<Formula> parts) {
  if (parts.empty()) return truth();
  if (parts.size() == 1) return parts.front();
  return Formula(std::make_shared<const Node>(Node{Kind::And, {}, {}, std::move(parts), {}}));
}

Formula Formula::disj(std::vector<Formula> parts) {
  if (parts.empty()) return falsity();
  if (parts.size() == 1) return parts.front();
  return Formula(std::make_shared<const Node>(Node{Kind::Or, {}, {}, std::move(parts), {}}));
}

Formula Formula::negate(Formula f) {
  return Formula(std::make_shared<const Node>(Node{Kind::Not, {}, {}, {std::move(f)}, {}}));
}

Formula Formula::implies(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{Kind::Implies, {}, {}, {std::move(lhs), std::move(rhs)}, {}}));
}

Formula Formula::exists(std::vector<Binding> vars, Formula body) {
  if (vars.empty()) return body;
  return Formula(std::make_shared<const Node>(Node{Kind::Exists, {}, {}, {std::move(body)}, std::move(vars)}));
}

Formula Formula::forall(std::vector<Binding> vars, Formula body) {
  if (vars.empty()) return body;
  return Formula(std::make_shared<const Node>(Node{Kind::Forall, {}, {}, {std::move(body)}, std::move(vars)}));
}

Formula::Kind Formula::kind() const { return node_->kind; }

bool Formula::is_atom() const {
  auto k = kind();
  return k == Kind::True || k == Kind::False || k == Kind::Pred || k == Kind::Eq;
}

const std::string& Formula::name() const { return node_->name; }
std::span<const Term> Formula::terms() const { return node_->terms; }
std::span<const Formula> Formula::children() const { return node_->children; }
std::span<const Binding> Formula::bound() const { return node_->bound; }

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  return node_->kind == other.node_->kind && node_->name == other.node_->name &&
         node_->terms == other.node_->terms && node_->bound == other.node_->bound &&
         node_->children == other.node_->children;
}

std::size_t Formula::size() const {
  std::size_t n = 1;
  for (const auto& t : terms()) n += t.size();
  for (const auto& c : children()) n += c.size();
  return n;
}

// ------------------------------------------------------------ free vars etc

namespace {

void collect_free(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.name());
    return;
  }
  for (const auto& a : t.args()) collect_free(a, out);
}

void collect_free(const Formula& f, std::set<std::string>& out) {
  for (const auto& t : f.terms()) collect_free(t, out);
  if (f.is(Formula::Kind::Exists) || f.is(Formula::Kind::Forall)) {
    std::set<std::string> inner;
    collect_free(f.body(), inner);
    for (const auto& b : f.bound()) inner.erase(b.name);
    out.insert(inner.begin(), inner.end());
    return;
  }
  for (const auto& c : f.children()) collect_free(c, out);
}

}  // namespace

std::set<std::string> free_variables(const Term& t) {
  std::set<std::string> out;
  collect_free(t, out);
  return out;
}

std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> out;
  collect_free(f, out);
  return out;
}

bool occurs(const std::string& var, const Term& t) {
  if (t.is_var()) return t.name() == var;
  for (const auto& a : t.args())
    if (occurs(var, a)) return true;
  return false;
}

Term substitute(const Term& t, const std::map<std::string, Term>& sub) {
  if (t.is_var()) {
    auto it = sub.find(t.name());
    return it == sub.end() ? t : it->second;
  }
  if (t.args().empty()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(substitute(a, sub));
  return Term::app(t.name(), std::move(args), t.sort());
}

Formula substitute(const Formula& f, const std::map<std::string, Term>& sub) {
  using K = Formula::Kind;
  if (sub.empty()) return f;
  switch (f.kind()) {
    case K::True:
    case K::False:
      return f;
    case K::Pred: {
      std::vector<Term> args;
      for (const auto& a : f.terms()) args.push_back(substitute(a, sub));
      return Formula::pred(f.name(), std::move(args));
    }
    case K::Eq:
      return Formula::eq(substitute(f.terms()[0], sub), substitute(f.terms()[1], sub));
    case K::And:
    case K::Or: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) parts.push_back(substitute(c, sub));
      return f.is(K::And) ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
    }
    case K::Not:
      return Formula::negate(substitute(f.body(), sub));
    case K::Implies:
      return Formula::implies(substitute(f.children()[0], sub), substitute(f.children()[1], sub));
    case K::Exists:
    case K::Forall: {
      std::map<std::string, Term> inner = sub;
      for (const auto& b : f.bound()) inner.erase(b.name);
      std::set<std::string> incoming;
      for (const auto& [name, term] : inner) {
        (void)name;
        collect_free(term, incoming);
      }
      std::set<std::string> taken = incoming;
      collect_free(f.body(), taken);
      std::vector<Binding> vars;
      for (const auto& b : f.bound()) {
        if (incoming.count(b.name) == 0) {
          vars.push_back(b);
          continue;
        }
        std::string fresh;
        for (int i = 1;; ++i) {
          fresh = b.name + "_" + std::to_string(i);
          if (taken.count(fresh) == 0) break;
        }
        taken.insert(fresh);
        inner.insert_or_assign(b.name, Term::var(fresh, b.sort));
        vars.push_back({fresh, b.sort});
      }
      auto body = substitute(f.body(), inner);
      return f.is(K::Exists) ? Formula::exists(std::move(vars), body) : Formula::forall(std::move(vars), body);
    }
  }
  return f;
}

Formula expand_quantifiers(const Formula& f, const std::map<std::string, std::vector<std::string>>& domains) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False:
    case K::Pred:
    case K::Eq:
      return f;
    case K::And:
    case K::Or: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) parts.push_back(expand_quantifiers(c, domains));
      return f.is(K::And) ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
    }
    case K::Not:
      return Formula::negate(expand_quantifiers(f.body(), domains));
    case K::Implies:
      return Formula::implies(expand_quantifiers(f.children()[0], domains),
                              expand_quantifiers(f.children()[1], domains));
    case K::Exists:
    case K::Forall:
      break;
  }
  std::vector<Binding> kept;
  std::vector<Binding> expanded;
  for (const auto& b : f.bound()) (domains.count(b.sort) != 0 ? expanded : kept).push_back(b);
  Formula body = expand_quantifiers(f.body(), domains);
  if (!expanded.empty()) {
    std::vector<Formula> instances;
    std::map<std::string, Term> sub;
    std::function<void(std::size_t)> go = [&](std::size_t i) {
      if (i == expanded.size()) {
        instances.push_back(substitute(body, sub));
        return;
      }
      for (const auto& c : domains.at(expanded[i].sort)) {
        sub.insert_or_assign(expanded[i].name, Term::constant(c, expanded[i].sort));
        go(i + 1);
      }
    };
    go(0);
    body = f.is(K::Forall) ? Formula::conj(std::move(instances)) : Formula::disj(std::move(instances));
  }
  if (kept.empty()) return body;
  return f.is(K::Forall) ? Formula::forall(std::move(kept), std::move(body)) : Formula::exists(std::move(kept), std::move(body));
}

namespace {

using Scope = std::vector<std::pair<std::string, std::string>>;  // (left name, right name)

bool alpha_term(const Term& a, const Term& b, const Scope& scope) {
  if (a.kind() != b.kind() || a.sort() != b.sort()) return false;
  if (a.is_var()) {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
      bool l = it->first == a.name();
      bool r = it->second == b.name();
      if (l || r) return l && r;
    }
    return a.name() == b.name();
  }
  if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!alpha_term(a.args()[i], b.args()[i], scope)) return false;
  return true;
}

bool alpha_formula(const Formula& a, const Formula& b, Scope& scope) {
  if (a.kind() != b.kind() || a.name() != b.name()) return false;
  if (a.terms().size() != b.terms().size() || a.children().size() != b.children().size()) return false;
  for (std::size_t i = 0; i < a.terms().size(); ++i)
    if (!alpha_term(a.terms()[i], b.terms()[i], scope)) return false;
  if (a.is(Formula::Kind::Exists) || a.is(Formula::Kind::Forall)) {
    if (a.bound().size() != b.bound().size()) return false;
    for (std::size_t i = 0; i < a.bound().size(); ++i) {
      if (a.bound()[i].sort != b.bound()[i].sort) return false;
      scope.emplace_back(a.bound()[i].name, b.bound()[i].name);
    }
    bool ok = alpha_formula(a.body(), b.body(), scope);
    scope.resize(scope.size() - a.bound().size());
    return ok;
  }
  for (std::size_t i = 0; i < a.children().size(); ++i)
    if (!alpha_formula(a.children()[i], b.children()[i], scope)) return false;
  return true;
}

}  // namespace

bool alpha_equivalent(const Formula& a, const Formula& b) {
  Scope scope;
  return alpha_formula(a, b, scope);
}

bool is_pe(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False:
    case K::Pred:
    case K::Eq:
      return true;
    case K::And:
    case K::Or:
      return std::all_of(f.children().begin(), f.children().end(), [](const Formula& c) { return is_pe(c); });
    case K::Exists:
      return is_pe(f.body());
    default:
      return false;
  }
}

bool is_geometric_axiom(const Formula& f) {
  const Formula* body = &f;
  while (body->is(Formula::Kind::Forall)) body = &body->body();
  if (body->is(Formula::Kind::Implies)) return is_pe(body->children()[0]) && is_pe(body->children()[1]);
  if (body->is(Formula::Kind::Not)) return is_pe(body->body());
  return is_pe(*body);
}

bool is_geometric(const Theory& t) {
  return std::all_of(t.axioms.begin(), t.axioms.end(), [](const Axiom& a) { return is_geometric_axiom(a.formula); });
}

// --------------------------------------------------------------- sort check

namespace {

void check_term(const Term& t, const Signature& sig, const std::map<std::string, std::string>& scope) {
  if (t.is_var()) {
    auto it = scope.find(t.name());
    if (it == scope.end()) throw LogicError("free variable " + t.name());
    if (it->second != t.sort()) throw LogicError("variable " + t.name() + " used at sort " + t.sort());
    return;
  }
  const auto* decl = sig.function(t.name());
  if (decl == nullptr) throw LogicError("unknown function symbol " + t.name());
  if (decl->args.size() != t.args().size())
    throw LogicError("wrong number of arguments to " + t.name());
  if (decl->result != t.sort()) throw LogicError("term " + t.name() + " has sort " + decl->result);
  for (std::size_t i = 0; i < decl->args.size(); ++i) {
    if (t.args()[i].sort() != decl->args[i])
      throw LogicError("argument " + std::to_string(i + 1) + " of " + t.name() + " is ill-sorted");
    check_term(t.args()[i], sig, scope);
  }
}

void check_formula(const Formula& f, const Signature& sig, std::map<std::string, std::string>& scope) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False:
      return;
    case K::Pred: {
      const auto* decl = sig.predicate(f.name());
      if (decl == nullptr) throw LogicError("unknown predicate " + f.name());
      if (decl->args.size() != f.terms().size()) throw LogicError("wrong number of arguments to " + f.name());
      for (std::size_t i = 0; i < decl->args.size(); ++i) {
        if (f.terms()[i].sort() != decl->args[i])
          throw LogicError("argument " + std::to_string(i + 1) + " of " + f.name() + " is ill-sorted");
        check_term(f.terms()[i], sig, scope);
      }
      return;
    }
    case K::Eq:
      if (f.terms()[0].sort() != f.terms()[1].sort()) throw LogicError("equality between different sorts");
      check_term(f.terms()[0], sig, scope);
      check_term(f.terms()[1], sig, scope);
      return;
    case K::Exists:
    case K::Forall: {
      auto saved = scope;
      for (const auto& b : f.bound()) {
        if (!sig.is_uninterpreted(b.sort)) throw LogicError("variable " + b.name + " bound at unsupported sort " + b.sort);
        scope[b.name] = b.sort;
      }
      check_formula(f.body(), sig, scope);
      scope = std::move(saved);
      return;
    }
    default:
      for (const auto& c : f.children()) check_formula(c, sig, scope);
  }
}

}  // namespace

void check_well_sorted(const Formula& f, const Signature& sig) {
  std::map<std::string, std::string> scope;
  check_formula(f, sig, scope);
}

// ------------------------------------------------------------------- Theory

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::User:
      return "user";
    case Provenance::Bounding:
      return "bounding";
    case Provenance::Avoid:
      return "avoid";
    case Provenance::HomTo:
      return "homTo";
    case Provenance::Flip:
      return "flip";
  }
  return "user";
}

std::vector<Formula> Theory::formulas() const {
  std::vector<Formula> out;
  out.reserve(axioms.size());
  for (const auto& a : axioms) out.push_back(a.formula);
  return out;
}

namespace {
void collect_quantified_sorts(const Formula& f, std::set<std::string>& out) {
  for (const auto& b : f.bound()) out.insert(b.sort);
  for (const auto& c : f.children()) collect_quantified_sorts(c, out);
}
}  // namespace

std::set<std::string> Theory::used_sorts() const {
  std::set<std::string> out;
  for (const auto& d : signature.symbols()) {
    for (const auto& a : d.args) out.insert(a);
    if (!d.is_predicate()) out.insert(d.result);
  }
  for (const auto& a : axioms) collect_quantified_sorts(a.formula, out);
  return out;
}

bool Theory::same_as(const Theory& other) const {
  if (!(signature == other.signature) || bounding != other.bounding || axioms.size() != other.axioms.size())
    return false;
  for (std::size_t i = 0; i < axioms.size(); ++i)
    if (!alpha_equivalent(axioms[i].formula, other.axioms[i].formula)) return false;
  return true;
}

// ------------------------------------------------------------------ Profile

Profile::Profile(std::map<std::string, int> bounds) {
  for (const auto& [sort, n] : bounds) set(sort, n);
}

Profile Profile::uniform(const Signature& sig, int bound) {
  Profile p;
  for (const auto& s : sig.sorts())
    if (!sig.is_generated_sort(s)) p.set(s, bound);
  return p;
}

void Profile::set(const std::string& sort, int bound) {
  if (bound < 1) throw LogicError("bound for sort " + sort + " must be at least 1");
  bounds_[sort] = bound;
}

std::optional<int> Profile::bound(const std::string& sort) const {
  auto it = bounds_.find(sort);
  if (it == bounds_.end()) return std::nullopt;
  return it->second;
}

void Profile::validate_against(const Signature& sig) const {
  for (const auto& [sort, n] : bounds_) {
    (void)n;
    if (!sig.is_uninterpreted(sort)) throw LogicError("profile names " + sort + ", which is not an uninterpreted sort");
  }
}

// ----------------------------------------------------------------- bounding

std::string fresh_constant_name(std::string_view sort, int index) {
  return std::string(1, kReservedPrefix) + std::string(sort) + "!" + std::to_string(index);
}

std::string hom_symbol_name(std::string_view sort) {
  return std::string(1, kReservedPrefix) + "hom!" + std::string(sort);
}

std::string target_sort_name(std::string_view sort) {
  return std::string(1, kReservedPrefix) + "tgt!" + std::string(sort);
}

std::string target_constant_name(std::string_view sort, int index) {
  return target_sort_name(sort) + "!" + std::to_string(index);
}

std::string enum_value_name(std::string_view sort, int index) {
  return std::string(1, kReservedPrefix) + "val!" + std::string(sort) + "!" + std::to_string(index);
}

Formula domain_closure(const std::string& sort, std::span<const std::string> constants) {
  const std::string var = "x";
  std::vector<Formula> cases;
  for (const auto& c : constants) cases.push_back(Formula::eq(Term::var(var, sort), Term::constant(c, sort)));
  return Formula::forall({{var, sort}}, Formula::disj(std::move(cases)));
}

Theory bound_theory(const Theory& t, const Profile& p) {
  p.validate_against(t.signature);
  Theory out = t;
  auto used = t.used_sorts();
  for (const auto& sort : t.signature.sorts()) {
    if (t.signature.is_generated_sort(sort)) continue;
    auto n = p.bound(sort);
    if (!n) {
      if (used.count(sort) != 0) throw LogicError("no bound given for sort " + sort);
      continue;
    }
    if (t.bounding.count(sort) != 0) throw LogicError("sort " + sort + " is already bounded");
    std::vector<std::string> names;
    for (int i = 1; i <= *n; ++i) {
      names.push_back(fresh_constant_name(sort, i));
      out.signature.add_function(names.back(), {}, sort, true);
    }
    out.axioms.push_back({domain_closure(sort, names), Provenance::Bounding});
    out.bounding.emplace(sort, std::move(names));
  }
  return out;
}

}  // namespace minfind
