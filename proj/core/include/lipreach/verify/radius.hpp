#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lipreach/verify/safety.hpp"

namespace lipreach::verify {

struct RadiusOptions {
    SafetyMode mode = SafetyMode::Difference;
    /// Safety probes per target, the first probe at b - a included.
    std::size_t max_iters = 30;
    /// Bisection stops once theta_max - theta_min <= radius_tol.
    double radius_tol = 1e-3;
    /// Competing label; empty means every other label.
    std::optional<std::size_t> target;
    /// Expected label of the anchor. A mismatch only adds a note.
    std::optional<std::size_t> declared_label;

    void validate() const;
};

enum class StopReason { Meet, Width, MaxIters, NeverUnsafe };
std::string to_string(StopReason reason);

struct RadiusProbe {
    double theta = 0.0;
    Verdict verdict = Verdict::Unknown;
    double margin = 0.0;
    /// l_j and u_k of the probe: in interval mode the original label's lower
    /// bound and the largest competing upper bound (tolerances applied); in
    /// difference mode the bounds of c_orig - c_k.
    double lower = 0.0;
    double upper = 0.0;
    std::optional<Vector> witness;
    std::optional<Vector> witness_output;
    std::size_t evaluations = 0;
};

struct TargetSearch {
    std::size_t target = 0;
    double r = 0.0;
    StopReason stop = StopReason::MaxIters;
    std::vector<RadiusProbe> history;
};

struct RadiusReport {
    double r = 0.0;
    std::size_t original_label = 0;
    /// The competing label whose search produced r.
    std::size_t determining_target = 0;
    SafetyMode mode = SafetyMode::Difference;
    std::vector<TargetSearch> searches;
    Vector anchor;
    std::vector<std::size_t> dims;
    double clamp_lo = 0.0;
    double clamp_hi = 1.0;
    std::vector<std::string> notes;

    std::size_t iterations() const noexcept;
    std::size_t evaluations() const noexcept;
};

/// Bisection on theta in [0, b - a]. The full box is probed first; a safe
/// verdict there returns r = b - a. Otherwise safe probes raise theta_min and
/// unsafe ones lower theta_max. A probe whose margin lies within +-epsilon
/// (the bounds meet) ends the search with r = that theta; otherwise r is the
/// midpoint of the final bracket. With every label as target each label is
/// searched separately and r is the smallest result.
RadiusReport max_safe_radius(std::shared_ptr<const nnkit::Model> model,
                             const perturb::PerturbationSpec& spec_template,
                             const lipopt::SolverConfig& cfg, const RadiusOptions& options = {});

}  // namespace lipreach::verify
