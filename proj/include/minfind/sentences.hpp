#pragma once

#include <string>
#include <vector>

#include "minfind/logic.hpp"
#include "minfind/model.hpp"
#include "minfind/rewrite.hpp"

namespace minfind {

/// Sentence true in an expansion of P exactly when P ≼ M.
struct HomToSentence {
  /// Target sorts, their constants and the hom symbols added to the user signature.
  Signature extension;
  Formula sentence = Formula::truth();
};

/// For each sort S with a domain in `m`: a target sort @tgt!S with one
/// distinct constant per element of m, and @hom!S : S -> @tgt!S.
HomToSentence hom_to_sentence(const FiniteModel& m);

/// Existential sentence over the user signature whose body is the C-rules of
/// the model's rewrite representation (constants replaced by variables) and
/// the facts. A model satisfies it iff m maps homomorphically into it.
Formula rep_sentence(const FiniteModel& m);
Formula rep_sentence(const RewriteRep& rep, const FiniteModel& m);

enum class EliminationOrder {
  /// First defining conjunct in body order, repeatedly.
  Given,
  /// Definitions whose arguments are already known first (graph sources).
  GraphSource,
};

struct HomFromSentence {
  Formula formula = Formula::truth();
  std::size_t residual_variables = 0;
  /// One entry per step, e.g. "x2 := c" or "keep x0".
  std::vector<std::string> trace;
};

/// Eliminates existential variables x through conjuncts f(t..) = x with x
/// not among the t. The input must be an existential conjunction of atoms.
HomFromSentence compress_hom_from(const Formula& rep, EliminationOrder order = EliminationOrder::GraphSource);

/// Compressed rep sentence of m under graph-source order.
Formula hom_from_sentence(const FiniteModel& m);
/// Negation of hom_from_sentence: true in B iff m does not map into B.
Formula avoid_sentence(const FiniteModel& m);

/// Fixes every naming constant to its element, every false atom over the
/// canonical names, and requires some true atom to become false.
Formula flip_sentence(const FiniteModel& p);
/// Declarations flip_sentence needs beyond the user signature.
Signature flip_signature(const FiniteModel& p);

/// Hom symbols @hom!S : S -> S for the sorts with a domain.
Signature endo_signature(const FiniteModel& m);
/// Closed diagram of m, "@hom is a homomorphism" and "@hom is not injective".
Formula ehom_sentence(const FiniteModel& m);

}  // namespace minfind
