#include "lipreach/verify/reach.hpp"

#include <algorithm>
#include <future>

#include "lipreach/lipopt/nested.hpp"

namespace lipreach::verify {

ReachOutcome reach(std::shared_ptr<const nnkit::Model> model, const perturb::PerturbationSpec& spec,
                   const perturb::Objective& objective, const lipopt::SolverConfig& cfg) {
    cfg.validate();
    perturb::Objective minimize = objective;
    minimize.direction = perturb::Direction::Minimize;
    const BoxFunction fn = perturb::make_box_function(model, spec, minimize);

    auto low = std::async(std::launch::async, [&] { return lipopt::minimize_nested(fn, cfg); });
    lipopt::Solution high = lipopt::maximize_nested(fn, cfg);
    lipopt::Solution lo = low.get();

    ReachOutcome out;
    ReachInterval& r = out.interval;
    r.objective = objective;
    r.lower = lo.result.lower;
    r.upper = high.result.upper;
    r.tolerance = std::max(lo.result.composed_tolerance, high.result.composed_tolerance);
    r.lower_converged = lo.result.converged;
    r.upper_converged = high.result.converged;
    r.evaluations = lo.result.evaluations + high.result.evaluations;
    r.attained_min = lo.result.upper;
    r.attained_max = high.result.lower;
    r.argmin = perturb::embed(spec, fn.bounds(), lo.result.witness);
    r.argmax = perturb::embed(spec, fn.bounds(), high.result.witness);
    out.min_trace = std::move(lo.trace);
    out.max_trace = std::move(high.trace);
    return out;
}

ReachInterval bound_one_side(std::shared_ptr<const nnkit::Model> model, const perturb::PerturbationSpec& spec,
                             const perturb::Objective& objective, const lipopt::SolverConfig& cfg, Side side,
                             lipopt::BoundsTrace* trace) {
    cfg.validate();
    perturb::Objective minimize = objective;
    minimize.direction = perturb::Direction::Minimize;
    const BoxFunction fn = perturb::make_box_function(model, spec, minimize);

    lipopt::Solution sol =
        side == Side::Lower ? lipopt::minimize_nested(fn, cfg) : lipopt::maximize_nested(fn, cfg);
    ReachInterval r;
    r.objective = objective;
    r.lower = sol.result.lower;
    r.upper = sol.result.upper;
    r.tolerance = sol.result.composed_tolerance;
    r.lower_converged = r.upper_converged = sol.result.converged;
    r.evaluations = sol.result.evaluations;
    const Vector witness = perturb::embed(spec, fn.bounds(), sol.result.witness);
    if (side == Side::Lower) {
        r.attained_min = r.attained_max = sol.result.upper;
    } else {
        r.attained_min = r.attained_max = sol.result.lower;
    }
    r.argmin = r.argmax = witness;
    if (trace) *trace = std::move(sol.trace);
    return r;
}

}  // namespace lipreach::verify
