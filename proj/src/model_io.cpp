#include "minfind/model_io.hpp"

#include <sstream>

#include "minfind/error.hpp"
#include "minfind/rewrite.hpp"

namespace minfind {

namespace {

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (const auto& x : xs) {
    if (!out.empty()) out += ' ';
    out += x;
  }
  return out;
}

std::string application(const std::string& symbol, const std::vector<std::string>& args) {
  return args.empty() ? symbol : "(" + symbol + " " + join(args) + ")";
}

std::vector<std::string> names_of(const FiniteModel& m, const SymbolDecl& d, const Tuple& t) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < t.size(); ++i) out.push_back(m.element_name(d.args[i], t[i]));
  return out;
}

}  // namespace

std::string model_to_text(const FiniteModel& m) {
  auto rep = to_rewrite_rep(m);
  std::ostringstream out;
  for (const auto& s : m.sorts()) out << "sort " << s << ": " << join(m.element_names(s)) << "\n";
  out << "d-rules:\n";
  for (const auto& r : rep.d_rules) out << "  " << r.from << " -> " << r.to << "\n";
  out << "c-rules:\n";
  for (const auto& r : rep.c_rules) out << "  " << application(r.function, r.args) << " -> " << r.result << "\n";
  out << "facts:\n";
  for (const auto& f : rep.facts) out << "  " << application(f.predicate, f.args) << "\n";
  return out.str();
}

nlohmann::ordered_json model_to_json(const FiniteModel& m) {
  using nlohmann::ordered_json;
  auto rep = to_rewrite_rep(m);
  ordered_json j;
  j["sorts"] = ordered_json::object();
  for (const auto& s : m.sorts()) j["sorts"][s] = m.element_names(s);
  j["funcs"] = ordered_json::object();
  j["preds"] = ordered_json::object();
  for (const auto& d : m.signature().symbols()) {
    if (d.is_predicate()) {
      auto rows = ordered_json::array();
      for (const auto& t : m.tuples(d.args))
        if (m.holds(d.name, t)) rows.push_back(names_of(m, d, t));
      j["preds"][d.name] = rows;
    } else {
      auto table = ordered_json::object();
      for (const auto& t : m.tuples(d.args)) table[join(names_of(m, d, t))] = m.element_name(d.result, m.apply(d.name, t));
      j["funcs"][d.name] = table;
    }
  }
  j["d_rules"] = ordered_json::array();
  for (const auto& r : rep.d_rules) j["d_rules"].push_back({r.from, r.to});
  j["c_rules"] = ordered_json::array();
  for (const auto& r : rep.c_rules) j["c_rules"].push_back({r.function, r.args, r.result});
  j["facts"] = ordered_json::array();
  for (const auto& f : rep.facts) j["facts"].push_back({f.predicate, f.args});
  return j;
}

FiniteModel model_from_json(const nlohmann::json& j, std::shared_ptr<const Signature> sig) {
  try {
    std::map<std::string, int> sizes;
    std::map<std::string, std::vector<std::string>> names;
    for (const auto& [sort, elems] : j.at("sorts").items()) {
      if (!sig->is_uninterpreted(sort)) throw ModelError("model lists unknown sort " + sort);
      names[sort] = elems.get<std::vector<std::string>>();
      sizes[sort] = static_cast<int>(names[sort].size());
      if (sizes[sort] == 0) throw ModelError("sort " + sort + " has an empty domain");
    }
    FiniteModel m(sig, sizes);
    for (auto& [sort, n] : names) m.set_element_names(sort, n);
    if (j.contains("d_rules"))
      for (const auto& r : j.at("d_rules")) {
        auto from = r.at(0).get<std::string>();
        auto at = m.named(r.at(1).get<std::string>());
        if (!at) throw ModelError("d-rule target " + r.at(1).get<std::string>() + " is not an element");
        m.add_alias(from, at->sort, at->element);
      }
    auto element = [&](const std::string& sort, const std::string& name) {
      auto at = m.named(name);
      if (!at || at->sort != sort) throw ModelError(name + " is not an element of " + sort);
      return at->element;
    };
    auto tuple_of = [&](const SymbolDecl& d, const std::vector<std::string>& args) {
      if (args.size() != d.args.size()) throw ModelError("wrong arity in table of " + d.name);
      Tuple t;
      for (std::size_t i = 0; i < args.size(); ++i) t.push_back(element(d.args[i], args[i]));
      return t;
    };
    for (const auto& d : sig->symbols()) {
      if (d.is_predicate()) {
        if (!j.at("preds").contains(d.name)) throw ModelError("missing table for predicate " + d.name);
        for (const auto& row : j.at("preds").at(d.name))
          m.set_predicate(d.name, tuple_of(d, row.get<std::vector<std::string>>()), true);
        continue;
      }
      if (!j.at("funcs").contains(d.name)) throw ModelError("missing table for function " + d.name);
      const auto& table = j.at("funcs").at(d.name);
      std::size_t seen = 0;
      for (const auto& [key, value] : table.items()) {
        std::vector<std::string> args;
        std::istringstream in(key);
        for (std::string a; in >> a;) args.push_back(a);
        m.set_function(d.name, tuple_of(d, args), element(d.result, value.get<std::string>()));
        ++seen;
      }
      if (seen != m.tuples(d.args).size()) throw ModelError("table of " + d.name + " is not total");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed model json: ") + e.what());
  }
}

}  // namespace minfind
