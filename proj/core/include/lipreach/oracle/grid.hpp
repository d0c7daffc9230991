#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lipreach/box_function.hpp"
#include "lipreach/nnkit/model.hpp"
#include "lipreach/perturb/perturbation.hpp"

namespace lipreach::oracle {

/// Uniform lattice lo + i * step in every dimension. With `inclusive` the
/// upper endpoint is added when the lattice does not land on it.
struct GridSpec {
    double step = 1e-3;
    bool inclusive = true;
    std::size_t cap = 10'000'000;

    void validate() const;
};

/// Lattice coordinates of one dimension.
std::vector<double> axis(const Interval& range, const GridSpec& grid);

/// Number of lattice points over the whole box.
std::size_t grid_size(const std::vector<Interval>& box, const GridSpec& grid);

struct Extrema {
    double min_value = 0.0;
    std::vector<double> min_point;
    double max_value = 0.0;
    std::vector<double> max_point;
    std::size_t points = 0;
};

/// Exhaustive extrema over the lattice. Ties go to the earliest lattice
/// point in row-major order, independent of the number of threads. Throws
/// ContractError when the lattice exceeds the cap; the message names a step
/// that would fit.
Extrema grid_extrema(const BoxFunction& fn, const GridSpec& grid, std::size_t threads = 0);

struct FlipRadius {
    /// Smallest multiple of the theta step whose ball holds a flipping point.
    double theta = 0.0;
    /// ||witness - anchor||_inf
    double distance = 0.0;
    nnkit::Vector witness;
    std::size_t original_label = 0;
    std::size_t flipped_to = 0;
};

/// True when some label other than `original` scores strictly higher.
bool flips(std::span<const double> output, std::size_t original);

/// Scans the lattice anchored at x0 (plus the clamp endpoints) over the whole
/// clamp box and returns the flip radius, equivalent to sweeping theta upward
/// in steps of `theta_step`. Empty when no lattice point flips. The theta of
/// the template is ignored.
std::optional<FlipRadius> grid_flip_radius(const nnkit::Model& model,
                                           const perturb::PerturbationSpec& spec_template,
                                           const GridSpec& grid, double theta_step);

}  // namespace lipreach::oracle
