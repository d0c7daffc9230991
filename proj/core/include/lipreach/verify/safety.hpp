#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lipreach/verify/reach.hpp"

namespace lipreach::verify {

enum class SafetyMode {
    /// Ball-min of the original label's confidence against the ball-max of
    /// every other label's confidence.
    Interval,
    /// Ball-min of c_orig - c_k for every other label k.
    Difference,
};

enum class Verdict { Safe, Unsafe, Unknown };

std::string to_string(SafetyMode mode);
std::string to_string(Verdict verdict);
SafetyMode parse_safety_mode(const std::string& text);

/// One optimized quantity of a safety check. In difference mode this is the
/// minimization of c_orig - c_k; in interval mode the maximization of c_k.
struct TargetBound {
    std::size_t label = 0;
    ReachInterval bound;  // only the side that was optimized is meaningful
};

struct SafetyVerdict {
    Verdict verdict = Verdict::Unknown;
    SafetyMode mode = SafetyMode::Difference;
    /// Difference mode: min_k (l_k - tol_k).
    /// Interval mode: (l_orig - tol_orig) - max_k (u_k + tol_k).
    double margin = 0.0;
    std::size_t original_label = 0;
    /// Present exactly when unsafe: an evaluated input whose argmax differs.
    std::optional<Vector> witness;
    std::optional<std::size_t> flipped_to;
    /// Interval mode only: minimization of the original label's confidence.
    std::optional<ReachInterval> original;
    std::vector<TargetBound> targets;
    std::size_t evaluations = 0;
    bool converged = true;
};

/// Decides whether the argmax label of the anchor is invariant over the
/// ball. `target` restricts the check to one competing label. Throws
/// ContractError when the anchor's argmax is tied.
///
/// Difference mode: unsafe when some evaluated c_orig - c_k < -epsilon (the
/// point is the witness), else safe when every lower bound minus its
/// tolerance exceeds epsilon, else unknown.
/// Interval mode: safe when the margin exceeds epsilon; otherwise unsafe if
/// one of the extremal points flips the argmax, else unknown.
SafetyVerdict check_safety(std::shared_ptr<const nnkit::Model> model, const perturb::PerturbationSpec& spec,
                           const lipopt::SolverConfig& cfg, SafetyMode mode,
                           std::optional<std::size_t> target = std::nullopt);

/// Argmax label of the anchor; throws ContractError on a tie.
std::size_t anchor_label(const nnkit::Model& model, const Vector& anchor);

}  // namespace lipreach::verify
