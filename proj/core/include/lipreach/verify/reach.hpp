#pragma once

#include <cstddef>
#include <memory>

#include "lipreach/lipopt/config.hpp"
#include "lipreach/lipopt/trace.hpp"
#include "lipreach/nnkit/model.hpp"
#include "lipreach/perturb/objective.hpp"
#include "lipreach/perturb/perturbation.hpp"

namespace lipreach::verify {

using nnkit::Vector;

/// [l, u] for o(f(x)) over the ball. `lower` comes from minimizing and
/// `upper` from maximizing, both certified sides. With a valid K,
///     lower - tolerance <= min o  and  max o <= upper + tolerance.
struct ReachInterval {
    perturb::Objective objective;
    double lower = 0.0;
    double upper = 0.0;
    /// Composed tolerance of the nested solves (0 for one perturbed coordinate).
    double tolerance = 0.0;
    bool lower_converged = false;
    bool upper_converged = false;
    std::size_t evaluations = 0;
    /// Smallest and largest values actually attained, with the inputs that
    /// produced them.
    double attained_min = 0.0;
    double attained_max = 0.0;
    Vector argmin;
    Vector argmax;

    double diameter() const noexcept { return upper - lower; }
    bool converged() const noexcept { return lower_converged && upper_converged; }
};

struct ReachOutcome {
    ReachInterval interval;
    lipopt::BoundsTrace min_trace;
    lipopt::BoundsTrace max_trace;
};

/// Runs the minimizing and maximizing solves concurrently on the same box
/// function. The objective's direction is ignored.
ReachOutcome reach(std::shared_ptr<const nnkit::Model> model, const perturb::PerturbationSpec& spec,
                   const perturb::Objective& objective, const lipopt::SolverConfig& cfg);

enum class Side { Lower, Upper };

/// Runs a single solve. For Side::Lower the interval's `upper` is the
/// attained minimum, for Side::Upper its `lower` is the attained maximum.
ReachInterval bound_one_side(std::shared_ptr<const nnkit::Model> model, const perturb::PerturbationSpec& spec,
                             const perturb::Objective& objective, const lipopt::SolverConfig& cfg, Side side,
                             lipopt::BoundsTrace* trace = nullptr);

}  // namespace lipreach::verify
