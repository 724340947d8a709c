#include "minfind/diagram.hpp"

#include "minfind/error.hpp"

namespace minfind {

namespace {

Term canonical(const FiniteModel& m, const std::string& sort, Element e) {
  return Term::constant(m.element_name(sort, e), sort);
}

Term variable(const FiniteModel& m, const std::string& sort, Element e) {
  return Term::var(element_variable(element_index(m, sort, e)), sort);
}

using ElementTerm = Term (*)(const FiniteModel&, const std::string&, Element);

void collect(const FiniteModel& m, ElementTerm name, std::vector<Formula>* positive, std::vector<Formula>* negative) {
  for (const auto& d : m.signature().symbols()) {
    for (const auto& t : m.tuples(d.args)) {
      std::vector<Term> args;
      for (std::size_t i = 0; i < t.size(); ++i) args.push_back(name(m, d.args[i], t[i]));
      if (d.is_predicate()) {
        bool holds = m.holds(d.name, t);
        auto* out = holds ? positive : negative;
        if (out != nullptr) out->push_back(Formula::pred(d.name, std::move(args)));
        continue;
      }
      Term lhs = Term::app(d.name, std::move(args), d.result);
      Element v = m.apply(d.name, t);
      for (Element c = 0; c < m.size(d.result); ++c) {
        auto* out = c == v ? positive : negative;
        if (out != nullptr) out->push_back(Formula::eq(lhs, name(m, d.result, c)));
      }
    }
  }
  if (negative == nullptr) return;
  for (const auto& s : m.sorts())
    for (Element a = 0; a < m.size(s); ++a)
      for (Element b = a + 1; b < m.size(s); ++b) negative->push_back(Formula::eq(name(m, s, a), name(m, s, b)));
}

}  // namespace

Signature naming_signature(const FiniteModel& m) {
  Signature sig = m.signature();
  for (const auto& s : m.sorts())
    for (const auto& n : m.element_names(s))
      if (!sig.has_symbol(n)) sig.add_function(n, {}, s, true);
  return m.signature().difference(sig);
}

Diagram diagram(const FiniteModel& m) {
  Diagram d;
  collect(m, canonical, &d.positive, &d.negative);
  for (const auto& s : m.sorts()) d.naming[s] = m.element_names(s);
  return d;
}

std::vector<Formula> positive_diagram(const FiniteModel& m) {
  std::vector<Formula> out;
  collect(m, canonical, &out, nullptr);
  return out;
}

Formula closed_diagram(const FiniteModel& m) {
  auto d = diagram(m);
  std::vector<Formula> parts = d.positive;
  for (const auto& a : d.negative) parts.push_back(Formula::negate(a));
  for (const auto& s : m.sorts()) parts.push_back(domain_closure(s, m.element_names(s)));
  return Formula::conj(std::move(parts));
}

std::string element_variable(int k) { return "x" + std::to_string(k); }

int element_index(const FiniteModel& m, const std::string& sort, Element e) {
  int base = 0;
  for (const auto& s : m.sorts()) {
    if (s == sort) return base + e;
    base += m.size(s);
  }
  throw ModelError("model has no domain for sort " + sort);
}

std::vector<Binding> element_bindings(const FiniteModel& m) {
  std::vector<Binding> out;
  int k = 0;
  for (const auto& s : m.sorts())
    for (Element e = 0; e < m.size(s); ++e) out.push_back({element_variable(k++), s});
  return out;
}

Formula characteristic_sentence(const FiniteModel& m) {
  std::vector<Formula> body;
  collect(m, variable, &body, nullptr);
  return Formula::exists(element_bindings(m), Formula::conj(std::move(body)));
}

Formula i_characteristic_sentence(const FiniteModel& m) {
  std::vector<Formula> body;
  collect(m, variable, &body, nullptr);
  for (const auto& s : m.sorts())
    for (Element a = 0; a < m.size(s); ++a)
      for (Element b = a + 1; b < m.size(s); ++b)
        body.push_back(Formula::negate(Formula::eq(variable(m, s, a), variable(m, s, b))));
  return Formula::exists(element_bindings(m), Formula::conj(std::move(body)));
}

}  // namespace minfind
