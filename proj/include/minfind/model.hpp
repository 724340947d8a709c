#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "minfind/logic.hpp"

namespace minfind {

class SolverSession;

using Element = int;
using Tuple = std::vector<Element>;

/// Per-sort list of constants that name model elements.
using ConstantInventory = std::map<std::string, std::vector<std::string>>;

struct NamedElement {
  std::string sort;
  Element element = 0;
  bool operator==(const NamedElement&) const = default;
};

/// A finite interpretation of a signature. Elements of sort S are 0..n-1;
/// each element has a canonical constant name, and the naming map may
/// list further constants that denote the same element.
class FiniteModel {
 public:
  FiniteModel() = default;
  /// Model with the given domain sizes, default names @S!1..@S!n, every
  /// function mapping to element 0 and every predicate false.
  FiniteModel(std::shared_ptr<const Signature> sig, const std::map<std::string, int>& sizes);

  const Signature& signature() const { return *signature_; }
  const std::shared_ptr<const Signature>& signature_ptr() const { return signature_; }

  /// Sorts that have a domain, in signature order.
  std::vector<std::string> sorts() const;
  bool has_domain(const std::string& sort) const { return names_.count(sort) != 0; }
  int size(const std::string& sort) const;
  int total_size() const;

  const std::vector<std::string>& element_names(const std::string& sort) const;
  const std::string& element_name(const std::string& sort, Element e) const { return element_names(sort).at(e); }
  void set_element_names(const std::string& sort, std::vector<std::string> names);

  /// Every naming constant (canonical ones included) and what it denotes.
  const std::map<std::string, NamedElement>& naming() const { return naming_; }
  std::optional<NamedElement> named(const std::string& constant) const;
  /// Adds a non-canonical constant denoting `e`.
  void add_alias(const std::string& constant, const std::string& sort, Element e);
  /// Constants naming elements of `sort`, in inventory order when known.
  std::vector<std::string> naming_constants(const std::string& sort) const;

  Element apply(const std::string& function, std::span<const Element> args) const;
  void set_function(const std::string& function, std::span<const Element> args, Element value);
  bool holds(const std::string& predicate, std::span<const Element> args) const;
  void set_predicate(const std::string& predicate, std::span<const Element> args, bool value);

  /// All argument tuples over the given sorts, in lexicographic order.
  std::vector<Tuple> tuples(std::span<const std::string> sorts) const;
  /// Number of true predicate atoms.
  std::size_t fact_count() const;

  bool operator==(const FiniteModel& other) const;

 private:
  std::size_t index(const SymbolDecl& decl, std::span<const Element> args) const;
  const SymbolDecl& decl(const std::string& name, bool predicate) const;

  std::shared_ptr<const Signature> signature_;
  std::map<std::string, std::vector<std::string>> names_;
  std::map<std::string, NamedElement> naming_;
  std::map<std::string, std::vector<Element>> functions_;
  std::map<std::string, std::vector<char>> predicates_;
};

/// Standard satisfaction of a closed formula. Constants may be user
/// symbols or naming constants of the model.
bool eval(const FiniteModel& m, const Formula& f);
Element eval_term(const FiniteModel& m, const Term& t);

/// Drops every symbol and sort not in `sig`; domains of kept sorts are unchanged.
FiniteModel reduct(const FiniteModel& m, const Signature& sig);

/// The submodel on the kept elements (renumbered in increasing order).
/// The kept set must be closed under every function.
FiniteModel induced_submodel(const FiniteModel& m, const std::map<std::string, std::vector<Element>>& keep);

/// Rewires the naming so that exactly the inventory constants name elements:
/// known names are kept, elements with foreign names get unused inventory
/// constants, and spare constants become aliases of element 0.
FiniteModel adopt_inventory(const FiniteModel& m, const ConstantInventory& inventory);

/// Reads a complete model out of a session whose last check-sat was sat.
/// `sig` lists the symbols to read; every element must be named by a
/// constant of `inventory`.
FiniteModel scrape_model(SolverSession& session, std::shared_ptr<const Signature> sig, const ConstantInventory& inventory);

/// Domain sizes only (the equality partition of the inventory).
std::map<std::string, int> scrape_domain_sizes(SolverSession& session, const ConstantInventory& inventory);

}  // namespace minfind
