#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lipreach/box_function.hpp"
#include "lipreach/nnkit/matrix.hpp"

namespace lipreach::perturb {

using nnkit::Vector;

/// L-infinity ball of radius `theta` around `anchor`, restricted to the
/// coordinates in `dims` and intersected with the global clamp box.
struct PerturbationSpec {
    Vector anchor;
    std::vector<std::size_t> dims;
    double theta = 0.0;
    double clamp_lo = 0.0;
    double clamp_hi = 1.0;

    /// Throws ContractError on out-of-range or duplicate indices, negative
    /// radius, an empty clamp box or an anchor outside it.
    void validate(std::size_t input_arity) const;

    /// Per perturbed coordinate: [max(a, x0_d - theta), min(b, x0_d + theta)].
    std::vector<Interval> box() const;

    PerturbationSpec with_theta(double r) const {
        PerturbationSpec s = *this;
        s.theta = r;
        return s;
    }
};

/// Substitutes the free coordinates into the anchor, clamping each into its
/// box. The result is exactly the input the network is evaluated on.
Vector embed(const PerturbationSpec& spec, std::span<const Interval> box,
             std::span<const double> free);

/// Projection of the anchor onto the perturbed coordinates.
std::vector<double> project(const PerturbationSpec& spec);

/// max_i |a_i - b_i|
double linf_distance(std::span<const double> a, std::span<const double> b);

}  // namespace lipreach::perturb
