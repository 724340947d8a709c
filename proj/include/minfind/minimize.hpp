#pragma once

#include <functional>
#include <string_view>

#include "minfind/logic.hpp"
#include "minfind/model.hpp"
#include "minfind/solver.hpp"

namespace minfind {

/// What the minimization loop certified about its output.
enum class Claim { Unminimized, IMinimal, AMinimal, AThenI, Core, PossiblyNonMinimal };
std::string_view to_string(Claim c);

struct MinimizationReport {
  FiniteModel input;
  FiniteModel output;
  std::size_t iterations = 0;
  std::size_t check_sat_calls = 0;
  Claim claim = Claim::Unminimized;
};

/// Reads the current solver model over the user signature.
using ModelReader = std::function<FiniteModel(SolverSession&)>;

/// A session holding a bounded theory at its current depth, plus the means
/// to read models back out of it.
struct BoundedContext {
  SolverSession& session;
  std::shared_ptr<const Signature> user_signature;
  ModelReader read;
};

/// Opens a session for `bounded` and asserts its axioms.
SolverSession open_bounded_session(const Theory& bounded, const SolverConfig& config);
/// Reader that scrapes through the bounding constants of `bounded`.
ModelReader bounding_reader(const Theory& bounded, std::shared_ptr<const Signature> user_signature);

/// Repeatedly asks for a model of T and flip(P) until there is none.
MinimizationReport i_minimize(BoundedContext& ctx, const FiniteModel& m);
/// Repeatedly asks for a model of T, homTo(P) and avoid(P) until there is none.
MinimizationReport a_minimize(BoundedContext& ctx, const FiniteModel& m);
/// a_minimize followed by i_minimize.
MinimizationReport minimize_both(BoundedContext& ctx, const FiniteModel& m);

/// Standalone variants: `bounded` must be the output of bound_theory, and
/// `m` a model of it over the user signature.
MinimizationReport i_minimize(const Theory& bounded, const FiniteModel& m, const SolverConfig& config);
MinimizationReport a_minimize(const Theory& bounded, const FiniteModel& m, const SolverConfig& config);
MinimizationReport minimize_both(const Theory& bounded, const FiniteModel& m, const SolverConfig& config);

/// Shrinks `m` along non-injective endomorphisms until none is left.
MinimizationReport compute_core(const FiniteModel& m, const SolverConfig& config);

/// Renames `m` onto the bounding constants of `bounded` and checks it
/// satisfies every axiom; throws ModelError otherwise.
FiniteModel prepare_model(const Theory& bounded, const FiniteModel& m);

}  // namespace minfind
