#include <algorithm>

#include "minfind/error.hpp"
#include "minfind/model.hpp"
#include "minfind/solver.hpp"

namespace minfind {

namespace {

struct Partition {
  // Index into the inventory of each element's canonical constant.
  std::vector<std::size_t> canonical;
  // Element denoted by each inventory constant.
  std::vector<Element> element_of;
};

// Queries every pair and checks that the answers form an equivalence.
Partition partition_sort(SolverSession& session, const std::string& sort, const std::vector<std::string>& consts) {
  const std::size_t n = consts.size();
  if (n == 0) throw ModelError("no naming constants for sort " + sort);
  std::vector<Formula> queries;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      queries.push_back(Formula::eq(Term::constant(consts[i], sort), Term::constant(consts[j], sort)));
      pairs.emplace_back(i, j);
    }
  std::vector<std::vector<bool>> same(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) same[i][i] = true;
  auto answers = session.get_values_bool(queries);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    same[pairs[k].first][pairs[k].second] = answers[k];
    same[pairs[k].second][pairs[k].first] = answers[k];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (same[i][j] && same[j][k] && !same[i][k])
          throw ModelError("solver gave intransitive equality answers for " + consts[i] + ", " + consts[j] + ", " + consts[k]);
  Partition p;
  p.element_of.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (p.element_of[i] >= 0) continue;
    auto e = static_cast<Element>(p.canonical.size());
    p.canonical.push_back(i);
    for (std::size_t j = i; j < n; ++j)
      if (same[i][j]) p.element_of[j] = e;
  }
  return p;
}

const std::vector<std::string>& constants_for(const ConstantInventory& inventory, const std::string& sort) {
  auto it = inventory.find(sort);
  if (it == inventory.end()) throw ModelError("sort " + sort + " has no naming constants; was the theory bounded?");
  return it->second;
}

}  // namespace

std::map<std::string, int> scrape_domain_sizes(SolverSession& session, const ConstantInventory& inventory) {
  std::map<std::string, int> sizes;
  for (const auto& [sort, consts] : inventory)
    sizes[sort] = static_cast<int>(partition_sort(session, sort, consts).canonical.size());
  return sizes;
}

FiniteModel scrape_model(SolverSession& session, std::shared_ptr<const Signature> sig, const ConstantInventory& inventory) {
  std::map<std::string, Partition> parts;
  std::map<std::string, int> sizes;
  for (const auto& sort : sig->sorts()) {
    if (inventory.count(sort) == 0) continue;
    parts[sort] = partition_sort(session, sort, inventory.at(sort));
    sizes[sort] = static_cast<int>(parts[sort].canonical.size());
  }
  FiniteModel model(sig, sizes);
  for (const auto& [sort, p] : parts) {
    const auto& consts = inventory.at(sort);
    std::vector<std::string> names;
    for (auto idx : p.canonical) names.push_back(consts[idx]);
    model.set_element_names(sort, std::move(names));
    for (std::size_t i = 0; i < consts.size(); ++i) model.add_alias(consts[i], sort, p.element_of[i]);
  }

  auto canonical_term = [&](const std::string& sort, Element e) {
    return Term::constant(model.element_name(sort, e), sort);
  };

  for (const auto& d : sig->symbols()) {
    for (const auto& a : d.args) constants_for(inventory, a);
    auto tuples = model.tuples(d.args);
    auto application = [&](const Tuple& t) {
      std::vector<Term> args;
      for (std::size_t i = 0; i < t.size(); ++i) args.push_back(canonical_term(d.args[i], t[i]));
      return args;
    };
    if (d.is_predicate()) {
      std::vector<Formula> queries;
      for (const auto& t : tuples) queries.push_back(Formula::pred(d.name, application(t)));
      auto answers = session.get_values_bool(queries);
      for (std::size_t k = 0; k < tuples.size(); ++k) model.set_predicate(d.name, tuples[k], answers[k]);
      continue;
    }
    constants_for(inventory, d.result);
    const int candidates = model.size(d.result);
    std::vector<Formula> queries;
    for (const auto& t : tuples) {
      Term lhs = Term::app(d.name, application(t), d.result);
      for (Element c = 0; c < candidates; ++c) queries.push_back(Formula::eq(lhs, canonical_term(d.result, c)));
    }
    auto answers = session.get_values_bool(queries);
    for (std::size_t k = 0; k < tuples.size(); ++k) {
      auto first = answers.begin() + static_cast<std::ptrdiff_t>(k * static_cast<std::size_t>(candidates));
      auto last = first + candidates;
      auto hit = std::find(first, last, true);
      if (hit == last)
        throw ModelError("function " + d.name + " has no value among the representatives; the bounding axioms are violated");
      if (std::find(hit + 1, last, true) != last) throw ModelError("solver reports two values for one application of " + d.name);
      model.set_function(d.name, tuples[k], static_cast<Element>(hit - first));
    }
  }
  return model;
}

}  // namespace minfind
