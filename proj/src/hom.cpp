#include "minfind/hom.hpp"

#include <algorithm>
#include <set>

#include "minfind/error.hpp"

namespace minfind {

namespace {

void require_same_signature(const FiniteModel& a, const FiniteModel& b) {
  if (!(a.signature().user_part() == b.signature().user_part()) && !(a.signature() == b.signature()))
    throw ModelError("homomorphism between models of different signatures");
  for (const auto& s : a.sorts())
    if (!b.has_domain(s)) throw ModelError("target model has no domain for sort " + s);
}

bool injective_kind(HomKind k) { return k == HomKind::Injective || k == HomKind::Embedding; }
bool strong_kind(HomKind k) { return k == HomKind::Strong || k == HomKind::Embedding; }

// One requirement on the map: a function entry or a predicate tuple of a.
struct Constraint {
  const SymbolDecl* decl;
  Tuple args;
  Element value;  // function value, or predicate truth in a
};

class Search {
 public:
  Search(const FiniteModel& a, const FiniteModel& b, HomKind kind) : a_(a), b_(b), kind_(kind) {
    for (const auto& s : a.sorts()) {
      assignment_[s].assign(static_cast<std::size_t>(a.size(s)), -1);
      for (Element e = 0; e < a.size(s); ++e) slots_.push_back({s, e});
    }
    for (const auto& d : a.signature().symbols()) {
      for (const auto& t : a.tuples(d.args)) {
        Constraint c{&d, t, 0};
        if (d.is_predicate()) {
          c.value = a.holds(d.name, t) ? 1 : 0;
          if (c.value == 0 && !strong_kind(kind)) continue;
        } else {
          c.value = a.apply(d.name, t);
        }
        std::size_t idx = constraints_.size();
        constraints_.push_back(std::move(c));
        std::set<std::pair<std::string, Element>> touched;
        const auto& cc = constraints_.back();
        for (std::size_t i = 0; i < cc.args.size(); ++i) touched.insert({d.args[i], cc.args[i]});
        if (!d.is_predicate()) touched.insert({d.result, cc.value});
        for (const auto& key : touched) watch_[key].push_back(idx);
      }
    }
    // Most constrained elements first.
    std::stable_sort(slots_.begin(), slots_.end(), [&](const auto& x, const auto& y) {
      return watch_[x].size() > watch_[y].size();
    });
  }

  std::optional<Hom> run() {
    if (injective_kind(kind_))
      for (const auto& s : a_.sorts())
        if (a_.size(s) > b_.size(s)) return std::nullopt;
    for (const auto& c : constraints_)
      if (c.args.empty() && c.decl->is_predicate() && !satisfied(c)) return std::nullopt;
    if (!extend(0)) return std::nullopt;
    Hom h;
    h.kind = kind_;
    for (const auto& [s, v] : assignment_) h.map[s] = v;
    return h;
  }

 private:
  bool assigned(const std::string& sort, Element e) const { return assignment_.at(sort)[static_cast<std::size_t>(e)] >= 0; }
  Element image(const std::string& sort, Element e) const { return assignment_.at(sort)[static_cast<std::size_t>(e)]; }

  // Checks a constraint once every element it mentions is mapped.
  bool satisfied(const Constraint& c) const {
    const auto& d = *c.decl;
    Tuple mapped;
    for (std::size_t i = 0; i < c.args.size(); ++i) {
      if (!assigned(d.args[i], c.args[i])) return true;
      mapped.push_back(image(d.args[i], c.args[i]));
    }
    if (d.is_predicate()) return b_.holds(d.name, mapped) == (c.value != 0);
    if (!assigned(d.result, c.value)) return true;
    return b_.apply(d.name, mapped) == image(d.result, c.value);
  }

  bool extend(std::size_t k) {
    if (k == slots_.size()) return true;
    const auto& [sort, e] = slots_[k];
    auto& slot = assignment_[sort][static_cast<std::size_t>(e)];
    auto& used = used_[sort];
    for (Element t = 0; t < b_.size(sort); ++t) {
      if (injective_kind(kind_) && used.count(t) != 0) continue;
      slot = t;
      bool ok = true;
      for (auto idx : watch_[{sort, e}])
        if (!satisfied(constraints_[idx])) {
          ok = false;
          break;
        }
      if (!ok) continue;
      if (injective_kind(kind_)) used.insert(t);
      if (extend(k + 1)) return true;
      if (injective_kind(kind_)) used.erase(t);
    }
    slot = -1;
    return false;
  }

  const FiniteModel& a_;
  const FiniteModel& b_;
  HomKind kind_;
  std::map<std::string, std::vector<Element>> assignment_;
  std::map<std::string, std::set<Element>> used_;
  std::vector<std::pair<std::string, Element>> slots_;
  std::vector<Constraint> constraints_;
  std::map<std::pair<std::string, Element>, std::vector<std::size_t>> watch_;
};

}  // namespace

bool is_hom(const FiniteModel& a, const FiniteModel& b, const Hom& h, HomKind kind) {
  require_same_signature(a, b);
  for (const auto& s : a.sorts()) {
    auto it = h.map.find(s);
    if (it == h.map.end() || it->second.size() != static_cast<std::size_t>(a.size(s))) return false;
    for (auto v : it->second)
      if (v < 0 || v >= b.size(s)) return false;
    if (injective_kind(kind)) {
      std::set<Element> seen(it->second.begin(), it->second.end());
      if (seen.size() != it->second.size()) return false;
    }
  }
  for (const auto& d : a.signature().symbols()) {
    for (const auto& t : a.tuples(d.args)) {
      Tuple mapped;
      for (std::size_t i = 0; i < t.size(); ++i) mapped.push_back(h(d.args[i], t[i]));
      if (d.is_predicate()) {
        bool src = a.holds(d.name, t);
        bool dst = b.holds(d.name, mapped);
        if (src && !dst) return false;
        if (strong_kind(kind) && dst && !src) return false;
      } else if (b.apply(d.name, mapped) != h(d.result, a.apply(d.name, t))) {
        return false;
      }
    }
  }
  return true;
}

std::optional<Hom> find_hom(const FiniteModel& a, const FiniteModel& b, HomKind kind) {
  require_same_signature(a, b);
  return Search(a, b, kind).run();
}

PreorderResult hom_preorder(const FiniteModel& a, const FiniteModel& b) {
  return {find_hom(a, b).has_value(), find_hom(b, a).has_value()};
}

bool is_strictly_below(const FiniteModel& a, const FiniteModel& b) {
  auto r = hom_preorder(a, b);
  return r.below && !r.above;
}

bool hom_equivalent(const FiniteModel& a, const FiniteModel& b) { return hom_preorder(a, b).equivalent(); }

bool isomorphic(const FiniteModel& a, const FiniteModel& b) {
  for (const auto& s : a.sorts())
    if (!b.has_domain(s) || a.size(s) != b.size(s)) return false;
  for (const auto& s : b.sorts())
    if (!a.has_domain(s)) return false;
  return find_hom(a, b, HomKind::Embedding).has_value();
}

Hom compose(const Hom& first, const Hom& second) {
  Hom out;
  for (const auto& [s, v] : first.map) {
    auto& dst = out.map[s];
    for (auto e : v) dst.push_back(second(s, e));
  }
  return out;
}

Hom identity_hom(const FiniteModel& m) {
  Hom h;
  for (const auto& s : m.sorts())
    for (Element e = 0; e < m.size(s); ++e) h.map[s].push_back(e);
  return h;
}

bool is_injective(const Hom& h) {
  for (const auto& [s, v] : h.map) {
    std::set<Element> seen(v.begin(), v.end());
    if (seen.size() != v.size()) return false;
  }
  return true;
}

bool is_surjective(const Hom& h, const FiniteModel& target) {
  for (const auto& s : target.sorts()) {
    auto it = h.map.find(s);
    if (it == h.map.end()) return false;
    std::set<Element> seen(it->second.begin(), it->second.end());
    if (static_cast<int>(seen.size()) != target.size(s)) return false;
  }
  return true;
}

}  // namespace minfind
