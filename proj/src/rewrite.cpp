#include "minfind/rewrite.hpp"

#include <algorithm>
#include <deque>

#include "minfind/error.hpp"

namespace minfind {

TermOrder::TermOrder(std::vector<std::string> constants, std::vector<std::string> symbols)
    : constants_(std::move(constants)), symbols_(std::move(symbols)) {
  for (std::size_t i = 0; i < constants_.size(); ++i) rank_[constants_[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < symbols_.size(); ++i) symbol_rank_[symbols_[i]] = static_cast<int>(i);
}

int TermOrder::rank(const std::string& constant) const {
  auto it = rank_.find(constant);
  if (it == rank_.end()) throw ModelError("constant " + constant + " is not ordered");
  return it->second;
}

int TermOrder::symbol_rank(const std::string& symbol) const {
  auto it = symbol_rank_.find(symbol);
  return it == symbol_rank_.end() ? static_cast<int>(symbol_rank_.size()) : it->second;
}

bool TermOrder::greater(const FlatTerm& a, const FlatTerm& b) const {
  if (a.naming_constant != b.naming_constant) return !a.naming_constant;
  if (a.naming_constant) return rank(a.symbol) > rank(b.symbol);
  if (a.symbol != b.symbol) return symbol_rank(a.symbol) > symbol_rank(b.symbol) ||
                                   (symbol_rank(a.symbol) == symbol_rank(b.symbol) && a.symbol > b.symbol);
  for (std::size_t i = 0; i < std::min(a.args.size(), b.args.size()); ++i)
    if (a.args[i] != b.args[i]) return rank(a.args[i]) > rank(b.args[i]);
  return a.args.size() > b.args.size();
}

// ------------------------------------------------------------- completion

namespace {

using CKey = std::pair<std::string, std::vector<std::string>>;

class Completion {
 public:
  explicit Completion(const TermOrder& order) : order_(order) {}

  void run(std::deque<GroundEquation> queue) {
    while (!queue.empty()) {
      auto eq = std::move(queue.front());
      queue.pop_front();
      auto s = normalize(eq.lhs);
      auto t = normalize(eq.rhs);
      if (s == t) continue;
      if (!s.naming_constant && !t.naming_constant)
        throw ModelError("equation between two applications of " + s.symbol + " and " + t.symbol);
      if (order_.greater(t, s)) std::swap(s, t);
      // s > t; t is a constant here.
      if (!s.naming_constant) {
        c_rules_[{s.symbol, s.args}] = t.symbol;
        continue;
      }
      add_d_rule(s.symbol, t.symbol, queue);
    }
    // Final right-hand-side reduction.
    for (auto& [from, to] : d_rules_) to = normalize_constant(to);
    for (auto& [lhs, rhs] : c_rules_) rhs = normalize_constant(rhs);
  }

  RewriteRep result(std::vector<std::string> constant_order) const {
    RewriteRep rep;
    rep.constant_order = std::move(constant_order);
    for (const auto& [from, to] : d_rules_) rep.d_rules.push_back({from, to});
    std::sort(rep.d_rules.begin(), rep.d_rules.end(),
              [&](const DRule& a, const DRule& b) { return order_.rank(a.from) < order_.rank(b.from); });
    for (const auto& [lhs, rhs] : c_rules_) rep.c_rules.push_back({lhs.first, lhs.second, rhs});
    std::sort(rep.c_rules.begin(), rep.c_rules.end(), [&](const CRule& a, const CRule& b) {
      return order_.greater(FlatTerm::apply(b.function, b.args), FlatTerm::apply(a.function, a.args));
    });
    return rep;
  }

 private:
  std::string normalize_constant(std::string c) const {
    for (auto it = d_rules_.find(c); it != d_rules_.end(); it = d_rules_.find(c)) c = it->second;
    return c;
  }

  FlatTerm normalize(const FlatTerm& t) const {
    if (t.naming_constant) return FlatTerm::constant(normalize_constant(t.symbol));
    FlatTerm out = t;
    for (auto& a : out.args) a = normalize_constant(a);
    auto it = c_rules_.find({out.symbol, out.args});
    if (it != c_rules_.end()) return FlatTerm::constant(normalize_constant(it->second));
    return out;
  }

  void add_d_rule(const std::string& from, const std::string& to, std::deque<GroundEquation>& queue) {
    d_rules_[from] = to;
    for (auto& [lhs, rhs] : d_rules_)
      if (rhs == from) rhs = to;
    for (auto it = c_rules_.begin(); it != c_rules_.end();) {
      const auto& args = it->first.second;
      if (std::find(args.begin(), args.end(), from) != args.end()) {
        // Left side became reducible: remove the rule and reconsider it.
        queue.push_back({FlatTerm::apply(it->first.first, args), FlatTerm::constant(it->second)});
        it = c_rules_.erase(it);
      } else {
        if (it->second == from) it->second = to;
        ++it;
      }
    }
  }

  const TermOrder& order_;
  std::map<std::string, std::string> d_rules_;
  std::map<CKey, std::string> c_rules_;
};

}  // namespace

RewriteRep complete(const std::vector<GroundEquation>& equations, const TermOrder& order) {
  Completion c(order);
  c.run(std::deque<GroundEquation>(equations.begin(), equations.end()));
  return c.result(order.constants());
}

TermOrder model_term_order(const FiniteModel& m) {
  std::vector<std::string> constants;
  for (const auto& s : m.sorts()) {
    auto names = m.naming_constants(s);
    constants.insert(constants.end(), names.begin(), names.end());
  }
  std::vector<std::string> symbols;
  for (const auto& d : m.signature().symbols()) symbols.push_back(d.name);
  return TermOrder(std::move(constants), std::move(symbols));
}

RewriteRep to_rewrite_rep(const FiniteModel& m) {
  auto order = model_term_order(m);
  std::vector<GroundEquation> equations;
  std::map<std::string, std::vector<std::vector<std::string>>> classes;
  for (const auto& s : m.sorts()) {
    auto& cls = classes[s];
    cls.resize(static_cast<std::size_t>(m.size(s)));
    for (const auto& c : m.naming_constants(s)) cls[static_cast<std::size_t>(m.named(c)->element)].push_back(c);
    for (const auto& members : cls)
      for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
          equations.push_back({FlatTerm::constant(members[i]), FlatTerm::constant(members[j])});
  }
  // Function graphs over every combination of naming constants, each
  // pointing at the greatest constant of the value's class.
  for (const auto& d : m.signature().functions()) {
    std::vector<std::vector<std::string>> arg_tuples{{}};
    for (const auto& a : d.args) {
      std::vector<std::vector<std::string>> next;
      for (const auto& prefix : arg_tuples)
        for (const auto& c : m.naming_constants(a)) {
          auto t = prefix;
          t.push_back(c);
          next.push_back(std::move(t));
        }
      arg_tuples = std::move(next);
    }
    for (const auto& args : arg_tuples) {
      Tuple elems;
      for (const auto& c : args) elems.push_back(m.named(c)->element);
      Element v = m.apply(d.name, elems);
      const auto& cls = classes[d.result][static_cast<std::size_t>(v)];
      equations.push_back({FlatTerm::apply(d.name, args), FlatTerm::constant(cls.back())});
    }
  }
  Completion c(order);
  c.run(std::deque<GroundEquation>(equations.begin(), equations.end()));
  auto rep = c.result(order.constants());
  for (const auto& d : m.signature().predicates()) {
    for (const auto& t : m.tuples(d.args)) {
      if (!m.holds(d.name, t)) continue;
      Fact f{d.name, {}};
      for (std::size_t i = 0; i < t.size(); ++i) f.args.push_back(rep.normalize_constant(m.element_name(d.args[i], t[i])));
      rep.facts.push_back(std::move(f));
    }
  }
  return rep;
}

// -------------------------------------------------------------- RewriteRep

std::string RewriteRep::normalize_constant(const std::string& constant) const {
  for (const auto& r : d_rules)
    if (r.from == constant) return r.to;
  return constant;
}

std::string RewriteRep::normalize(const Term& ground) const {
  if (ground.is_var()) throw ModelError("cannot normalize a term with variable " + ground.name());
  std::vector<std::string> args;
  for (const auto& a : ground.args()) args.push_back(normalize(a));
  if (args.empty() && std::find(constant_order.begin(), constant_order.end(), ground.name()) != constant_order.end())
    return normalize_constant(ground.name());
  for (const auto& r : c_rules)
    if (r.function == ground.name() && r.args == args) return r.result;
  throw ModelError("no rule for " + ground.name() + "; the representation is not total");
}

std::set<std::string> RewriteRep::canonical_constants() const {
  std::set<std::string> out(constant_order.begin(), constant_order.end());
  for (const auto& r : d_rules) out.erase(r.from);
  return out;
}

bool RewriteRep::is_self_reduced() const {
  std::set<std::string> reducible;
  for (const auto& r : d_rules) {
    if (!reducible.insert(r.from).second) return false;
  }
  for (const auto& r : d_rules)
    if (reducible.count(r.to) != 0) return false;
  std::set<std::pair<std::string, std::vector<std::string>>> lhs;
  for (const auto& r : c_rules) {
    if (reducible.count(r.result) != 0) return false;
    for (const auto& a : r.args)
      if (reducible.count(a) != 0) return false;
    if (!lhs.insert({r.function, r.args}).second) return false;
  }
  return true;
}

}  // namespace minfind
