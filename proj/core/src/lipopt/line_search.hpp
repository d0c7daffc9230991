#pragma once

// Shared one-dimensional driver behind minimize_1d and every nesting level.

#include <functional>
#include <optional>

#include "lipreach/lipopt/config.hpp"
#include "lipreach/lipopt/trace.hpp"

namespace lipreach::lipopt::detail {

/// Raised by evaluation callbacks on NaN/Inf; converted to EvaluationError by
/// the public entry points once the trace can be attached.
struct NonFiniteValue {
    double point;
};

struct LineOutcome {
    bool evaluated = false;  // at least one point
    double lower = 0.0;
    double upper = 0.0;
    double best_point = 0.0;
    bool converged = false;
    bool budget_hit = false;
    double lipschitz = 0.0;
};

/// `evaluate` returns nullopt when the evaluation budget is spent.
using LineEvaluator = std::function<std::optional<double>(double)>;

LineOutcome run_line(double a, double b, double epsilon, const SolverConfig& cfg, double k_start,
                     const LineEvaluator& evaluate, BoundsTrace* trace);

}  // namespace lipreach::lipopt::detail
