#include "lipreach/lipopt/nested.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "line_search.hpp"

namespace lipreach::lipopt {

std::vector<double> level_tolerances(std::size_t dimension, const SolverConfig& cfg) {
    std::vector<double> eps(dimension, 0.0);
    if (dimension == 0) return eps;
    if (cfg.inner.rule == InnerTolerance::Rule::Fixed) {
        std::fill(eps.begin(), eps.end(), cfg.inner.value);
        eps[0] = cfg.epsilon;
        return eps;
    }
    double remaining = cfg.epsilon;
    for (std::size_t k = 0; k + 1 < dimension; ++k) {
        eps[k] = 0.5 * remaining;
        remaining *= 0.5;
    }
    eps[dimension - 1] = remaining;
    return eps;
}

namespace {

class NestedSolver {
public:
    NestedSolver(const BoxFunction& fn, const SolverConfig& cfg, double sign)
        : fn_(fn),
          cfg_(cfg),
          sign_(sign),
          eps_(level_tolerances(fn.dimension(), cfg)),
          level_k_(fn.dimension(), cfg.k_init),
          point_(fn.dimension(), 0.0) {}

    Solution run() {
        Solution sol;
        const std::size_t n = fn_.dimension();
        if (n == 0) {
            const double v = sign_ * fn_(point_);
            ++used_;
            if (!std::isfinite(v)) throw EvaluationError("objective is not finite", {});
            sol.trace.records.push_back({0, v, v, 0.0, v, cfg_.k_init});
            sol.result = {v, v, {}, used_, true, cfg_.k_init, 0.0};
            return sol;
        }

        detail::LineOutcome outer;
        try {
            outer = solve_level(0, &sol.trace);
        } catch (const detail::NonFiniteValue&) {
            std::ostringstream msg;
            msg << "objective is not finite at (";
            for (std::size_t i = 0; i < n; ++i) msg << (i ? ", " : "") << point_[i];
            msg << ")";
            throw EvaluationError(msg.str(), std::move(sol.trace));
        }

        sol.trace.budget_exhausted = budget_hit_;
        OptResult& r = sol.result;
        r.lower = outer.evaluated ? outer.lower : -std::numeric_limits<double>::infinity();
        r.upper = best_value_;
        r.witness = best_point_;
        r.evaluations = used_;
        r.converged = outer.converged && !budget_hit_ && !inner_unconverged_;
        r.lipschitz = outer.lipschitz;
        r.composed_tolerance = std::accumulate(eps_.begin() + 1, eps_.end(), 0.0);
        return sol;
    }

private:
    detail::LineOutcome solve_level(std::size_t k, BoundsTrace* trace) {
        const Interval& box = fn_.bounds()[k];
        const bool innermost = k + 1 == fn_.dimension();
        const detail::LineEvaluator evaluate = [&, k, innermost](double x) -> std::optional<double> {
            point_[k] = x;
            if (innermost) return evaluate_point();
            const detail::LineOutcome inner = solve_level(k + 1, nullptr);
            if (inner.budget_hit || !inner.evaluated) return std::nullopt;
            if (!inner.converged) inner_unconverged_ = true;
            return inner.upper;
        };
        const detail::LineOutcome out =
            detail::run_line(box.lo, box.hi, eps_[k], cfg_, level_k_[k], evaluate, trace);
        if (cfg_.mode == LipschitzMode::Dynamic) level_k_[k] = std::max(level_k_[k], out.lipschitz);
        return out;
    }

    std::optional<double> evaluate_point() {
        if (used_ >= cfg_.max_evals) {
            budget_hit_ = true;
            return std::nullopt;
        }
        ++used_;
        const double v = sign_ * fn_(point_);
        if (!std::isfinite(v)) throw detail::NonFiniteValue{point_.back()};
        if (v < best_value_) {
            best_value_ = v;
            best_point_ = point_;
        }
        return v;
    }

    const BoxFunction& fn_;
    const SolverConfig& cfg_;
    double sign_;
    std::vector<double> eps_;
    std::vector<double> level_k_;
    std::vector<double> point_;
    std::size_t used_ = 0;
    bool budget_hit_ = false;
    bool inner_unconverged_ = false;
    double best_value_ = std::numeric_limits<double>::infinity();
    std::vector<double> best_point_;
};

}  // namespace

Solution minimize_nested(const BoxFunction& fn, const SolverConfig& cfg) {
    cfg.validate();
    return NestedSolver(fn, cfg, 1.0).run();
}

Solution maximize_nested(const BoxFunction& fn, const SolverConfig& cfg) {
    cfg.validate();
    Solution sol = NestedSolver(fn, cfg, -1.0).run();
    const double lower = sol.result.lower;
    sol.result.lower = -sol.result.upper;
    sol.result.upper = -lower;
    sol.trace.negated = true;
    return sol;
}

}  // namespace lipreach::lipopt
