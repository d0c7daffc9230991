#pragma once

#include <cstddef>
#include <vector>

#include "lipreach/box_function.hpp"
#include "lipreach/lipopt/sawtooth.hpp"

namespace lipreach::lipopt {

/// Tolerance each nesting level terminates on, outermost first.
std::vector<double> level_tolerances(std::size_t dimension, const SolverConfig& cfg);

/// Minimizes fn over its box with the nested one-dimensional scheme:
///     phi_n(x_1..x_n)  = w(x_1..x_n)
///     phi_k(x_1..x_k)  = min over x_{k+1} of phi_{k+1}
/// and min w = min over x_1 of phi_1. Each evaluation of phi_k is itself a
/// sawtooth solve at the next level; its value is that solve's upper bound,
/// so the returned witness is always an evaluated point.
///
/// The trace records the outermost level. `max_evals` counts evaluations of
/// fn across all levels.
Solution minimize_nested(const BoxFunction& fn, const SolverConfig& cfg);

/// Maximizes by minimizing -fn. The returned bounds are for fn itself:
/// `upper` is the certified side, `lower` the best value attained (at the
/// witness). The trace stays in the minimization frame (negated = true).
Solution maximize_nested(const BoxFunction& fn, const SolverConfig& cfg);

}  // namespace lipreach::lipopt
