#pragma once

#include <vector>

#include "minfind/logic.hpp"
#include "minfind/model.hpp"

namespace minfind {

/// Ground literals of a model over its canonical element names.
struct Diagram {
  std::vector<Formula> positive;
  std::vector<Formula> negative;
  /// Canonical constant of every element, per sort.
  ConstantInventory naming;
};

/// Declarations of the canonical element names of `m` (generated constants).
Signature naming_signature(const FiniteModel& m);

/// Atoms decided over canonical names: function graph atoms f(c..)=c,
/// predicate atoms, and equalities between distinct canonical names.
Diagram diagram(const FiniteModel& m);
std::vector<Formula> positive_diagram(const FiniteModel& m);

/// Diagram literals plus a covering axiom per sort, so that every model of
/// the result is isomorphic to `m` on the named elements.
Formula closed_diagram(const FiniteModel& m);

/// Name of the variable standing for the k-th element (sorts in order).
std::string element_variable(int k);
/// Variable bindings x0..x(n-1) over all elements of `m`, sort-major.
std::vector<Binding> element_bindings(const FiniteModel& m);
/// Global element index used by element_variable.
int element_index(const FiniteModel& m, const std::string& sort, Element e);

/// Existential closure of the positive diagram, one variable per element.
Formula characteristic_sentence(const FiniteModel& m);
/// characteristic_sentence plus pairwise disequalities of same-sort variables.
Formula i_characteristic_sentence(const FiniteModel& m);

}  // namespace minfind
