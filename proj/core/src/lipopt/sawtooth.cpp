#include "lipreach/lipopt/sawtooth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "line_search.hpp"

namespace lipreach::lipopt {

namespace {

constexpr double kMinSeparation = 1e-12;

}  // namespace

double SawtoothState::Segment::slope() const {
    const double dy = right - left;
    if (!(dy > 0.0)) return 0.0;
    return std::abs(right_value - left_value) / dy;
}

SawtoothState::SawtoothState(double lipschitz, double a, double wa, double b, double wb)
    : lipschitz_(lipschitz), best_value_(wa), best_point_(a) {
    if (!(a < b)) throw ContractError("sawtooth state needs a < b");
    if (wb < wa) {
        best_value_ = wb;
        best_point_ = b;
    }
    all_.push_back({a, wa, b, wb, 0.0, true});
    all_.back().crossing = crossing(all_.back());
    push(0);
}

double SawtoothState::crossing(const Segment& s) const {
    return 0.5 * (s.left_value + s.right_value) - 0.5 * lipschitz_ * (s.right - s.left);
}

void SawtoothState::push(std::size_t index) {
    heap_.emplace(all_[index].crossing, all_[index].left, index);
}

void SawtoothState::prune() const {
    while (!heap_.empty() && !all_[std::get<2>(heap_.top())].alive) heap_.pop();
}

double SawtoothState::lower_bound() const {
    prune();
    return std::get<0>(heap_.top());
}

std::vector<SawtoothState::Segment> SawtoothState::segments() const {
    std::vector<Segment> out;
    for (const Segment& s : all_) {
        if (s.alive) out.push_back(s);
    }
    std::sort(out.begin(), out.end(), [](const Segment& l, const Segment& r) { return l.left < r.left; });
    return out;
}

double SawtoothState::max_slope() const {
    double m = 0.0;
    for (const Segment& s : all_) {
        if (s.alive) m = std::max(m, s.slope());
    }
    return m;
}

bool SawtoothState::raise_lipschitz(double k) {
    if (!(k > lipschitz_)) return false;
    lipschitz_ = k;
    Heap rebuilt;
    for (std::size_t i = 0; i < all_.size(); ++i) {
        if (!all_[i].alive) continue;
        all_[i].crossing = crossing(all_[i]);
        rebuilt.emplace(all_[i].crossing, all_[i].left, i);
    }
    heap_ = std::move(rebuilt);
    return true;
}

std::optional<SawtoothState::Proposal> SawtoothState::propose() const {
    prune();
    const std::size_t index = std::get<2>(heap_.top());
    const Segment& s = all_[index];
    if (!(s.right - s.left > 2.0 * kMinSeparation)) return std::nullopt;

    const double y = 0.5 * (s.left + s.right) - (s.right_value - s.left_value) / (2.0 * lipschitz_);
    if (y > s.left + kMinSeparation && y < s.right - kMinSeparation) return Proposal{index, y, false};
    return Proposal{index, 0.5 * (s.left + s.right), true};
}

void SawtoothState::insert(const Proposal& p, double value) {
    Segment& s = all_[p.segment];
    s.alive = false;
    const Segment left{s.left, s.left_value, p.point, value, 0.0, true};
    const Segment right{p.point, value, s.right, s.right_value, 0.0, true};
    all_.push_back(left);
    all_.back().crossing = crossing(all_.back());
    push(all_.size() - 1);
    all_.push_back(right);
    all_.back().crossing = crossing(all_.back());
    push(all_.size() - 1);
    ++points_;
    if (value < best_value_) {
        best_value_ = value;
        best_point_ = p.point;
    }
}

double update_lipschitz(const SawtoothState& state, const SolverConfig& cfg) {
    if (cfg.mode == LipschitzMode::Fixed) return state.lipschitz();
    return std::max({state.lipschitz(), cfg.k_init, cfg.eta * state.max_slope()});
}

namespace detail {

LineOutcome run_line(double a, double b, double epsilon, const SolverConfig& cfg, double k_start,
                     const LineEvaluator& evaluate, BoundsTrace* trace) {
    LineOutcome out;
    const bool dynamic = cfg.mode == LipschitzMode::Dynamic;
    double k = dynamic ? std::max(k_start, cfg.k_init) : cfg.k_init;
    out.lipschitz = k;

    const auto wa = evaluate(a);
    if (!wa) {
        out.budget_hit = true;
        return out;
    }
    out.evaluated = true;
    out.lower = out.upper = *wa;
    out.best_point = a;
    if (!(a < b)) {
        out.converged = true;
        if (trace) trace->records.push_back({0, *wa, *wa, a, *wa, k});
        return out;
    }

    const auto wb = evaluate(b);
    if (!wb) {
        // A single point certifies nothing below it.
        out.lower = -std::numeric_limits<double>::infinity();
        out.budget_hit = true;
        if (trace) trace->records.push_back({0, out.lower, out.upper, a, *wa, k});
        return out;
    }

    SawtoothState state(k, a, *wa, b, *wb);
    if (dynamic) state.raise_lipschitz(update_lipschitz(state, cfg));
    if (trace) {
        trace->records.push_back({0, state.lower_bound(), state.upper_bound(), state.best_point(),
                                  state.upper_bound(), state.lipschitz()});
    }

    std::size_t iteration = 0;
    while (!(state.upper_bound() - state.lower_bound() <= epsilon)) {
        const auto proposal = state.propose();
        if (!proposal) break;
        const auto value = evaluate(proposal->point);
        if (!value) {
            out.budget_hit = true;
            break;
        }
        const SawtoothState::Segment split = state.segment(proposal->segment);
        state.insert(*proposal, *value);
        if (dynamic) {
            // K already dominates eta times every earlier slope, so only the
            // two new segments can raise it.
            const double dl = proposal->point - split.left;
            const double dr = split.right - proposal->point;
            double slope = 0.0;
            if (dl > 0.0) slope = std::max(slope, std::abs(*value - split.left_value) / dl);
            if (dr > 0.0) slope = std::max(slope, std::abs(split.right_value - *value) / dr);
            state.raise_lipschitz(cfg.eta * slope);
        }
        if (trace) {
            trace->records.push_back({++iteration, state.lower_bound(), state.upper_bound(),
                                      proposal->point, *value, state.lipschitz()});
        }
    }

    out.lower = state.lower_bound();
    out.upper = state.upper_bound();
    out.best_point = state.best_point();
    out.lipschitz = state.lipschitz();
    out.converged = !out.budget_hit && out.upper - out.lower <= epsilon;
    return out;
}

}  // namespace detail

Solution minimize_1d(const std::function<double(double)>& fn, double a, double b,
                     const SolverConfig& cfg) {
    cfg.validate();
    if (!(a < b)) throw ContractError("minimize_1d needs a < b");

    Solution sol;
    std::size_t used = 0;
    const detail::LineEvaluator evaluate = [&](double x) -> std::optional<double> {
        if (used >= cfg.max_evals) return std::nullopt;
        ++used;
        const double v = fn(x);
        if (!std::isfinite(v)) throw detail::NonFiniteValue{x};
        return v;
    };

    detail::LineOutcome line;
    try {
        line = detail::run_line(a, b, cfg.epsilon, cfg, cfg.k_init, evaluate, &sol.trace);
    } catch (const detail::NonFiniteValue& bad) {
        throw EvaluationError("objective is not finite at " + std::to_string(bad.point),
                              std::move(sol.trace));
    }
    sol.trace.budget_exhausted = line.budget_hit;
    sol.result = {line.lower, line.upper, {line.best_point}, used, line.converged,
                  line.lipschitz, 0.0};
    return sol;
}

}  // namespace lipreach::lipopt
