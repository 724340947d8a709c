#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "minfind/logic.hpp"
#include "minfind/minimize.hpp"
#include "minfind/model.hpp"
#include "minfind/solver.hpp"

namespace minfind {

enum class MinimizeMode { None, I, A, Both };
std::string_view to_string(MinimizeMode m);

enum class StreamStatus { Exhausted, Truncated, Incomplete };
std::string_view to_string(StreamStatus s);

struct StreamOptions {
  /// Minimization applied to each found model (the US stream only).
  MinimizeMode mode = MinimizeMode::Both;
  /// Stop after this many models; unlimited when empty.
  std::optional<std::size_t> max_models;
  /// Called with each model as soon as it is found.
  std::function<void(const MinimizationReport&)> on_model;
};

struct SupportStream {
  std::vector<MinimizationReport> models;
  StreamStatus status = StreamStatus::Exhausted;
  /// Avoid sentences conjoined so far, one per emitted model.
  std::vector<Formula> avoid;
  std::size_t check_sat_calls = 0;
};

/// Bounds `t` by `p`, then repeatedly: find a model, minimize it, emit it,
/// and add its avoid sentence. At exhaustion every bounded model of `t` is
/// in the hom-cone of some emitted model.
SupportStream set_of_support(const Theory& t, const Profile& p, const SolverConfig& config,
                             const StreamOptions& options = {});

/// The enumerated-types pipeline: each model is found by solving with every
/// sort turned into an enumerated type of the size the solver first chose,
/// i-minimized there, then pushed down by avoid-cone descent.
SupportStream et_stream(const Theory& t, const Profile& p, const SolverConfig& config,
                        const StreamOptions& options = {});

}  // namespace minfind
