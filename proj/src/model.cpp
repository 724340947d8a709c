#include "minfind/model.hpp"

#include <algorithm>
#include <functional>

#include "minfind/error.hpp"

namespace minfind {

FiniteModel::FiniteModel(std::shared_ptr<const Signature> sig, const std::map<std::string, int>& sizes)
    : signature_(std::move(sig)) {
  for (const auto& [sort, n] : sizes) {
    if (!signature_->is_uninterpreted(sort)) throw ModelError("domain given for unknown sort " + sort);
    if (n < 1) throw ModelError("domain of sort " + sort + " must be non-empty");
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back(fresh_constant_name(sort, i));
    set_element_names(sort, std::move(names));
  }
  for (const auto& d : signature_->symbols()) {
    std::size_t cells = 1;
    for (const auto& a : d.args) {
      if (!has_domain(a)) throw ModelError("symbol " + d.name + " ranges over sort " + a + ", which has no domain");
      cells *= static_cast<std::size_t>(size(a));
    }
    if (d.is_predicate()) {
      predicates_[d.name].assign(cells, 0);
    } else {
      if (!has_domain(d.result)) throw ModelError("symbol " + d.name + " has result sort " + d.result + " without a domain");
      functions_[d.name].assign(cells, 0);
    }
  }
}

std::vector<std::string> FiniteModel::sorts() const {
  std::vector<std::string> out;
  for (const auto& s : signature_->sorts())
    if (has_domain(s)) out.push_back(s);
  return out;
}

int FiniteModel::size(const std::string& sort) const {
  auto it = names_.find(sort);
  if (it == names_.end()) throw ModelError("sort " + sort + " has no domain");
  return static_cast<int>(it->second.size());
}

int FiniteModel::total_size() const {
  int n = 0;
  for (const auto& [sort, names] : names_) n += static_cast<int>(names.size());
  return n;
}

const std::vector<std::string>& FiniteModel::element_names(const std::string& sort) const {
  auto it = names_.find(sort);
  if (it == names_.end()) throw ModelError("sort " + sort + " has no domain");
  return it->second;
}

void FiniteModel::set_element_names(const std::string& sort, std::vector<std::string> names) {
  auto old = names_.find(sort);
  if (old != names_.end() && old->second.size() != names.size())
    throw ModelError("renaming must keep the domain size of " + sort);
  for (auto it = naming_.begin(); it != naming_.end();) {
    if (it->second.sort == sort) {
      it = naming_.erase(it);
    } else {
      ++it;
    }
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!naming_.emplace(names[i], NamedElement{sort, static_cast<Element>(i)}).second)
      throw ModelError("constant " + names[i] + " names two elements");
  }
  names_[sort] = std::move(names);
}

std::optional<NamedElement> FiniteModel::named(const std::string& constant) const {
  auto it = naming_.find(constant);
  if (it == naming_.end()) return std::nullopt;
  return it->second;
}

void FiniteModel::add_alias(const std::string& constant, const std::string& sort, Element e) {
  if (e < 0 || e >= size(sort)) throw ModelError("alias " + constant + " names an element outside the domain");
  auto [it, inserted] = naming_.emplace(constant, NamedElement{sort, e});
  if (!inserted && !(it->second == NamedElement{sort, e})) throw ModelError("constant " + constant + " names two elements");
}

namespace {
// "@S!12" sorts after "@S!9": compare by the numeric suffix when both have one.
bool constant_less(const std::string& a, const std::string& b) {
  auto ia = a.rfind('!');
  auto ib = b.rfind('!');
  if (ia != std::string::npos && ib != std::string::npos && a.compare(0, ia, b, 0, ib) == 0) {
    auto sa = a.substr(ia + 1);
    auto sb = b.substr(ib + 1);
    bool da = !sa.empty() && std::all_of(sa.begin(), sa.end(), ::isdigit);
    bool db = !sb.empty() && std::all_of(sb.begin(), sb.end(), ::isdigit);
    if (da && db && sa.size() != sb.size()) return sa.size() < sb.size();
  }
  return a < b;
}
}  // namespace

std::vector<std::string> FiniteModel::naming_constants(const std::string& sort) const {
  std::vector<std::string> out;
  for (const auto& [name, at] : naming_)
    if (at.sort == sort) out.push_back(name);
  std::sort(out.begin(), out.end(), constant_less);
  return out;
}

const SymbolDecl& FiniteModel::decl(const std::string& name, bool predicate) const {
  const auto* d = predicate ? signature_->predicate(name) : signature_->function(name);
  if (d == nullptr) throw ModelError(std::string(predicate ? "predicate " : "function ") + name + " is not interpreted by the model");
  return *d;
}

std::size_t FiniteModel::index(const SymbolDecl& d, std::span<const Element> args) const {
  if (args.size() != d.args.size()) throw ModelError("wrong number of arguments to " + d.name);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < args.size(); ++i) {
    int n = size(d.args[i]);
    if (args[i] < 0 || args[i] >= n) throw ModelError("argument out of range for " + d.name);
    idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(args[i]);
  }
  return idx;
}

Element FiniteModel::apply(const std::string& function, std::span<const Element> args) const {
  const auto& d = decl(function, false);
  return functions_.at(function)[index(d, args)];
}

void FiniteModel::set_function(const std::string& function, std::span<const Element> args, Element value) {
  const auto& d = decl(function, false);
  if (value < 0 || value >= size(d.result)) throw ModelError("value out of range for " + function);
  functions_.at(function)[index(d, args)] = value;
}

bool FiniteModel::holds(const std::string& predicate, std::span<const Element> args) const {
  const auto& d = decl(predicate, true);
  return predicates_.at(predicate)[index(d, args)] != 0;
}

void FiniteModel::set_predicate(const std::string& predicate, std::span<const Element> args, bool value) {
  const auto& d = decl(predicate, true);
  predicates_.at(predicate)[index(d, args)] = value ? 1 : 0;
}

std::vector<Tuple> FiniteModel::tuples(std::span<const std::string> sorts) const {
  std::vector<Tuple> out{Tuple{}};
  for (const auto& s : sorts) {
    int n = size(s);
    std::vector<Tuple> next;
    next.reserve(out.size() * static_cast<std::size_t>(n));
    for (const auto& prefix : out) {
      for (Element e = 0; e < n; ++e) {
        auto t = prefix;
        t.push_back(e);
        next.push_back(std::move(t));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::size_t FiniteModel::fact_count() const {
  std::size_t n = 0;
  for (const auto& [name, table] : predicates_) n += static_cast<std::size_t>(std::count(table.begin(), table.end(), 1));
  return n;
}

bool FiniteModel::operator==(const FiniteModel& other) const {
  if (signature_ != other.signature_ && !(signature_ && other.signature_ && *signature_ == *other.signature_)) return false;
  return names_ == other.names_ && naming_ == other.naming_ && functions_ == other.functions_ &&
         predicates_ == other.predicates_;
}

// --------------------------------------------------------------------- eval

namespace {

using Env = std::vector<std::pair<std::string, Element>>;

Element term_value(const FiniteModel& m, const Term& t, const Env& env) {
  if (t.is_var()) {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
      if (it->first == t.name()) return it->second;
    throw ModelError("free variable " + t.name());
  }
  if (t.args().empty()) {
    if (auto named = m.named(t.name())) return named->element;
  }
  Tuple args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(term_value(m, a, env));
  return m.apply(t.name(), args);
}

bool holds_in(const FiniteModel& m, const Formula& f, Env& env) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
      return true;
    case K::False:
      return false;
    case K::Pred: {
      Tuple args;
      for (const auto& a : f.terms()) args.push_back(term_value(m, a, env));
      return m.holds(f.name(), args);
    }
    case K::Eq:
      return term_value(m, f.terms()[0], env) == term_value(m, f.terms()[1], env);
    case K::And:
      for (const auto& c : f.children())
        if (!holds_in(m, c, env)) return false;
      return true;
    case K::Or:
      for (const auto& c : f.children())
        if (holds_in(m, c, env)) return true;
      return false;
    case K::Not:
      return !holds_in(m, f.body(), env);
    case K::Implies:
      return !holds_in(m, f.children()[0], env) || holds_in(m, f.children()[1], env);
    case K::Exists:
    case K::Forall: {
      bool want = f.is(K::Exists);
      std::size_t base = env.size();
      for (const auto& v : f.bound()) env.emplace_back(v.name, 0);
      // Look for a witness (exists) or a counterexample (forall).
      std::function<bool(std::size_t)> search = [&](std::size_t i) {
        if (i == f.bound().size()) return holds_in(m, f.body(), env) == want;
        int n = m.size(f.bound()[i].sort);
        for (Element e = 0; e < n; ++e) {
          env[base + i].second = e;
          if (search(i + 1)) return true;
        }
        return false;
      };
      bool found = search(0);
      env.resize(base);
      return want ? found : !found;
    }
  }
  return false;
}

}  // namespace

bool eval(const FiniteModel& m, const Formula& f) {
  Env env;
  return holds_in(m, f, env);
}

Element eval_term(const FiniteModel& m, const Term& t) { return term_value(m, t, {}); }

// -------------------------------------------------------- derived models

FiniteModel reduct(const FiniteModel& m, const Signature& sig) {
  if (!sig.is_subsignature_of(m.signature())) throw ModelError("reduct target is not a sub-signature of the model's signature");
  std::map<std::string, int> sizes;
  for (const auto& s : sig.sorts())
    if (m.has_domain(s)) sizes[s] = m.size(s);
  FiniteModel out(std::make_shared<const Signature>(sig), sizes);
  for (const auto& s : out.sorts()) {
    out.set_element_names(s, m.element_names(s));
    for (const auto& [name, at] : m.naming())
      if (at.sort == s) out.add_alias(name, s, at.element);
  }
  for (const auto& d : sig.symbols()) {
    for (const auto& t : out.tuples(d.args)) {
      if (d.is_predicate()) {
        out.set_predicate(d.name, t, m.holds(d.name, t));
      } else {
        out.set_function(d.name, t, m.apply(d.name, t));
      }
    }
  }
  return out;
}

FiniteModel induced_submodel(const FiniteModel& m, const std::map<std::string, std::vector<Element>>& keep) {
  std::map<std::string, std::map<Element, Element>> renumber;
  std::map<std::string, int> sizes;
  for (const auto& s : m.sorts()) {
    auto it = keep.find(s);
    std::vector<Element> kept;
    if (it == keep.end()) {
      for (Element e = 0; e < m.size(s); ++e) kept.push_back(e);
    } else {
      kept = it->second;
      std::sort(kept.begin(), kept.end());
      kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    }
    if (kept.empty()) throw ModelError("submodel would leave sort " + s + " empty");
    for (std::size_t i = 0; i < kept.size(); ++i) renumber[s][kept[i]] = static_cast<Element>(i);
    sizes[s] = static_cast<int>(kept.size());
  }
  FiniteModel out(m.signature_ptr(), sizes);
  for (const auto& s : out.sorts()) {
    std::vector<std::string> names;
    for (const auto& [old, fresh] : renumber[s]) {
      (void)fresh;
      names.push_back(m.element_name(s, old));
    }
    out.set_element_names(s, std::move(names));
    for (const auto& [name, at] : m.naming()) {
      if (at.sort != s) continue;
      auto r = renumber[s].find(at.element);
      if (r != renumber[s].end()) out.add_alias(name, s, r->second);
    }
  }
  for (const auto& d : m.signature().symbols()) {
    for (const auto& t : out.tuples(d.args)) {
      Tuple orig;
      for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& map = renumber[d.args[i]];
        orig.push_back(std::next(map.begin(), t[i])->first);
      }
      if (d.is_predicate()) {
        out.set_predicate(d.name, t, m.holds(d.name, orig));
      } else {
        Element v = m.apply(d.name, orig);
        auto r = renumber[d.result].find(v);
        if (r == renumber[d.result].end()) throw ModelError("kept elements are not closed under " + d.name);
        out.set_function(d.name, t, r->second);
      }
    }
  }
  return out;
}

FiniteModel adopt_inventory(const FiniteModel& m, const ConstantInventory& inventory) {
  FiniteModel out = m;
  for (const auto& s : m.sorts()) {
    auto it = inventory.find(s);
    if (it == inventory.end()) throw ModelError("no naming constants for sort " + s);
    const auto& consts = it->second;
    if (static_cast<int>(consts.size()) < m.size(s))
      throw ModelError("model has " + std::to_string(m.size(s)) + " elements of sort " + s + " but the bound is " +
                       std::to_string(consts.size()));
    auto have = m.naming_constants(s);
    auto want = consts;
    std::sort(have.begin(), have.end());
    std::sort(want.begin(), want.end());
    if (have == want) continue;
    std::vector<std::string> names(consts.begin(), consts.begin() + m.size(s));
    out.set_element_names(s, std::move(names));
    for (std::size_t i = static_cast<std::size_t>(m.size(s)); i < consts.size(); ++i) out.add_alias(consts[i], s, 0);
  }
  return out;
}

}  // namespace minfind
