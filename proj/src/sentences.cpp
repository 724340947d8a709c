#include "minfind/sentences.hpp"

#include <algorithm>

#include "minfind/diagram.hpp"
#include "minfind/error.hpp"
#include "minfind/syntax.hpp"

namespace minfind {

namespace {

std::vector<Binding> fresh_bindings(const std::vector<std::string>& sorts, const std::string& prefix) {
  std::vector<Binding> out;
  for (std::size_t i = 0; i < sorts.size(); ++i) out.push_back({prefix + std::to_string(i), sorts[i]});
  return out;
}

std::vector<Term> vars_of(const std::vector<Binding>& bs) {
  std::vector<Term> out;
  for (const auto& b : bs) out.push_back(Term::var(b.name, b.sort));
  return out;
}

Term hom_apply(const Term& t) { return Term::app(hom_symbol_name(t.sort()), {t}, target_sort_name(t.sort())); }

Term target_constant(const std::string& sort, Element e) {
  return Term::constant(target_constant_name(sort, e + 1), target_sort_name(sort));
}

}  // namespace

// ------------------------------------------------------------------ homTo

HomToSentence hom_to_sentence(const FiniteModel& m) {
  HomToSentence out;
  out.extension = m.signature();
  std::vector<Formula> parts;
  for (const auto& s : m.sorts()) {
    auto tgt = target_sort_name(s);
    out.extension.add_sort(tgt, true);
    std::vector<std::string> names;
    for (Element e = 0; e < m.size(s); ++e) {
      names.push_back(target_constant_name(s, e + 1));
      out.extension.add_function(names.back(), {}, tgt, true);
    }
    out.extension.add_function(hom_symbol_name(s), {s}, tgt, true);
    for (Element a = 0; a < m.size(s); ++a)
      for (Element b = a + 1; b < m.size(s); ++b)
        parts.push_back(Formula::negate(Formula::eq(target_constant(s, a), target_constant(s, b))));
    parts.push_back(domain_closure(tgt, names));
  }
  for (const auto& d : m.signature().symbols()) {
    auto xs = fresh_bindings(d.args, "x");
    auto xt = vars_of(xs);
    std::vector<Formula> cases;
    auto mapped_to = [&](const Tuple& t) {
      std::vector<Formula> eqs;
      for (std::size_t i = 0; i < t.size(); ++i) eqs.push_back(Formula::eq(hom_apply(xt[i]), target_constant(d.args[i], t[i])));
      return eqs;
    };
    if (d.is_predicate()) {
      for (const auto& t : m.tuples(d.args))
        if (m.holds(d.name, t)) cases.push_back(Formula::conj(mapped_to(t)));
      parts.push_back(Formula::forall(xs, Formula::implies(Formula::pred(d.name, xt), Formula::disj(std::move(cases)))));
      continue;
    }
    Binding y{"y", d.result};
    Term yt = Term::var(y.name, y.sort);
    for (const auto& t : m.tuples(d.args)) {
      auto eqs = mapped_to(t);
      eqs.push_back(Formula::eq(hom_apply(yt), target_constant(d.result, m.apply(d.name, t))));
      cases.push_back(Formula::conj(std::move(eqs)));
    }
    auto all = xs;
    all.push_back(y);
    parts.push_back(Formula::forall(all, Formula::implies(Formula::eq(Term::app(d.name, xt, d.result), yt),
                                                          Formula::disj(std::move(cases)))));
  }
  out.sentence = Formula::conj(std::move(parts));
  out.extension = m.signature().difference(out.extension);
  return out;
}

// -------------------------------------------------------------------- rep

Formula rep_sentence(const RewriteRep& rep, const FiniteModel& m) {
  auto as_var = [&](const std::string& constant) {
    auto at = m.named(constant);
    if (!at) throw ModelError("constant " + constant + " does not name an element");
    return Term::var(element_variable(element_index(m, at->sort, at->element)), at->sort);
  };
  std::vector<Formula> body;
  for (const auto& r : rep.c_rules) {
    const auto* d = m.signature().function(r.function);
    if (d == nullptr) throw ModelError("rule for unknown function " + r.function);
    std::vector<Term> args;
    for (const auto& a : r.args) args.push_back(as_var(a));
    body.push_back(Formula::eq(Term::app(r.function, std::move(args), d->result), as_var(r.result)));
  }
  for (const auto& f : rep.facts) {
    std::vector<Term> args;
    for (const auto& a : f.args) args.push_back(as_var(a));
    body.push_back(Formula::pred(f.predicate, std::move(args)));
  }
  return Formula::exists(element_bindings(m), Formula::conj(std::move(body)));
}

Formula rep_sentence(const FiniteModel& m) { return rep_sentence(to_rewrite_rep(m), m); }

// --------------------------------------------------------------- compress

namespace {

std::vector<Formula> conjuncts(const Formula& f) {
  if (f.is(Formula::Kind::True)) return {};
  if (f.is(Formula::Kind::And)) return {f.children().begin(), f.children().end()};
  return {f};
}

// Index of the variable x when `c` has the shape f(t..) = x with x bound
// and not occurring in the t.
std::optional<std::size_t> definition_of(const Formula& c, const std::vector<Binding>& vars) {
  if (!c.is(Formula::Kind::Eq)) return std::nullopt;
  const Term& lhs = c.terms()[0];
  const Term& rhs = c.terms()[1];
  if (lhs.is_var() || !rhs.is_var()) return std::nullopt;
  auto it = std::find_if(vars.begin(), vars.end(), [&](const Binding& b) { return b.name == rhs.name(); });
  if (it == vars.end() || occurs(rhs.name(), lhs)) return std::nullopt;
  return static_cast<std::size_t>(it - vars.begin());
}

bool trivial(const Formula& c) { return c.is(Formula::Kind::Eq) && c.terms()[0] == c.terms()[1]; }

void eliminate(std::vector<Formula>& body, std::vector<Binding>& vars, std::size_t conjunct, std::size_t var,
               std::vector<std::string>& trace) {
  Term value = body[conjunct].terms()[0];
  std::string name = vars[var].name;
  trace.push_back(name + " := " + print_term(value));
  body.erase(body.begin() + static_cast<std::ptrdiff_t>(conjunct));
  vars.erase(vars.begin() + static_cast<std::ptrdiff_t>(var));
  std::map<std::string, Term> sub{{name, value}};
  std::vector<Formula> next;
  for (const auto& c : body) {
    auto r = substitute(c, sub);
    if (!trivial(r)) next.push_back(std::move(r));
  }
  body = std::move(next);
}

bool mentions_only(const Term& t, const std::set<std::string>& known) {
  for (const auto& v : free_variables(t))
    if (known.count(v) == 0) return false;
  return true;
}

}  // namespace

HomFromSentence compress_hom_from(const Formula& rep, EliminationOrder order) {
  std::vector<Binding> vars;
  Formula inner = rep;
  while (inner.is(Formula::Kind::Exists)) {
    vars.insert(vars.end(), inner.bound().begin(), inner.bound().end());
    inner = inner.body();
  }
  auto body = conjuncts(inner);
  for (const auto& c : body)
    if (!c.is_atom()) throw LogicError("compress_hom_from expects an existential conjunction of atoms");

  HomFromSentence out;
  if (order == EliminationOrder::Given) {
    for (;;) {
      bool progressed = false;
      for (std::size_t i = 0; i < body.size() && !progressed; ++i) {
        if (auto v = definition_of(body[i], vars)) {
          eliminate(body, vars, i, *v, out.trace);
          progressed = true;
        }
      }
      if (!progressed) break;
    }
  } else {
    std::set<std::string> known;
    for (;;) {
      // Candidate definitions, and those whose left side is already known.
      std::optional<std::size_t> best_ready;
      std::optional<std::size_t> best_any;
      for (std::size_t i = 0; i < body.size(); ++i) {
        if (!definition_of(body[i], vars)) continue;
        const Term& lhs = body[i].terms()[0];
        if (!best_any || lhs < body[*best_any].terms()[0]) best_any = i;
        if (mentions_only(lhs, known) && (!best_ready || lhs < body[*best_ready].terms()[0])) best_ready = i;
      }
      if (best_ready) {
        eliminate(body, vars, *best_ready, *definition_of(body[*best_ready], vars), out.trace);
        continue;
      }
      if (!best_any) break;
      // No source: keep the least unknown argument variable quantified.
      std::optional<std::size_t> keep;
      for (const auto& v : free_variables(body[*best_any].terms()[0])) {
        if (known.count(v) != 0) continue;
        for (std::size_t k = 0; k < vars.size(); ++k)
          if (vars[k].name == v && (!keep || k < *keep)) keep = k;
      }
      if (!keep) break;
      known.insert(vars[*keep].name);
      out.trace.push_back("keep " + vars[*keep].name);
    }
  }
  // Variables no longer mentioned range over nonempty domains and are dropped.
  std::set<std::string> used;
  for (const auto& c : body)
    for (const auto& v : free_variables(c)) used.insert(v);
  std::vector<Binding> residual;
  for (const auto& b : vars)
    if (used.count(b.name) != 0) residual.push_back(b);
  out.residual_variables = residual.size();
  out.formula = Formula::exists(std::move(residual), Formula::conj(std::move(body)));
  return out;
}

Formula hom_from_sentence(const FiniteModel& m) {
  return compress_hom_from(rep_sentence(m), EliminationOrder::GraphSource).formula;
}

Formula avoid_sentence(const FiniteModel& m) { return Formula::negate(hom_from_sentence(m)); }

// ------------------------------------------------------------------- flip

Signature flip_signature(const FiniteModel& p) {
  Signature sig = p.signature();
  for (const auto& s : p.sorts())
    for (const auto& c : p.naming_constants(s))
      if (!sig.has_symbol(c)) sig.add_function(c, {}, s, true);
  return p.signature().difference(sig);
}

Formula flip_sentence(const FiniteModel& p) {
  auto d = diagram(p);
  std::vector<Formula> parts;
  for (const auto& s : p.sorts())
    for (const auto& c : p.naming_constants(s)) {
      Element e = p.named(c)->element;
      const auto& canon = p.element_name(s, e);
      if (c != canon) parts.push_back(Formula::eq(Term::constant(c, s), Term::constant(canon, s)));
    }
  for (const auto& a : d.negative) parts.push_back(Formula::negate(a));
  std::vector<Formula> drop;
  for (const auto& a : d.positive) drop.push_back(Formula::negate(a));
  parts.push_back(Formula::disj(std::move(drop)));
  return Formula::conj(std::move(parts));
}

// ------------------------------------------------------------------- ehom

Signature endo_signature(const FiniteModel& m) {
  Signature sig = m.signature();
  for (const auto& s : m.sorts()) sig.add_function(hom_symbol_name(s), {s}, s, true);
  return m.signature().difference(sig);
}

Formula ehom_sentence(const FiniteModel& m) {
  std::vector<Formula> parts{closed_diagram(m)};
  auto h = [](const Term& t) { return Term::app(hom_symbol_name(t.sort()), {t}, t.sort()); };
  for (const auto& d : m.signature().symbols()) {
    auto xs = fresh_bindings(d.args, "x");
    auto xt = vars_of(xs);
    std::vector<Term> hx;
    for (const auto& t : xt) hx.push_back(h(t));
    if (d.is_predicate()) {
      parts.push_back(Formula::forall(xs, Formula::implies(Formula::pred(d.name, xt), Formula::pred(d.name, hx))));
    } else {
      parts.push_back(Formula::forall(xs, Formula::eq(h(Term::app(d.name, xt, d.result)), Term::app(d.name, hx, d.result))));
    }
  }
  std::vector<Formula> collapse;
  for (const auto& s : m.sorts()) {
    Term x = Term::var("x", s);
    Term y = Term::var("y", s);
    collapse.push_back(Formula::exists({{"x", s}, {"y", s}},
                                       Formula::conj({Formula::negate(Formula::eq(x, y)), Formula::eq(h(x), h(y))})));
  }
  parts.push_back(Formula::disj(std::move(collapse)));
  return Formula::conj(std::move(parts));
}

}  // namespace minfind
