#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <queue>
#include <tuple>
#include <vector>

#include "lipreach/error.hpp"
#include "lipreach/lipopt/config.hpp"
#include "lipreach/lipopt/trace.hpp"

namespace lipreach::lipopt {

/// Result of a solve. `lower` is the minimum of the sawtooth underestimator,
/// `upper` the smallest evaluated value, attained exactly at `witness`.
///
/// When K is at least the true Lipschitz constant (at every nesting level)
///     lower - composed_tolerance <= true minimum <= upper.
/// With an underestimated K nothing is guaranteed and `lower` may even
/// exceed `upper`.
struct OptResult {
    double lower = 0.0;
    double upper = 0.0;
    std::vector<double> witness;
    std::size_t evaluations = 0;
    bool converged = false;
    double lipschitz = 0.0;
    /// Sum of the tolerances of all inner nesting levels (0 in one dimension).
    double composed_tolerance = 0.0;
};

struct Solution {
    OptResult result;
    BoundsTrace trace;
};

/// Thrown when the objective returns NaN or infinity. The trace recorded up
/// to that point is preserved.
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, BoundsTrace trace)
        : Error(what), trace_(std::move(trace)) {}
    const BoundsTrace& trace() const noexcept { return trace_; }

private:
    BoundsTrace trace_;
};

/// Piecewise-linear lower bound H(x) = max_y { w(y) - K |x - y| } over the
/// evaluated points of a one-dimensional problem.
///
/// Each pair of consecutive points forms a segment whose crossing value
///     z = (w_l + w_r) / 2 - K (y_r - y_l) / 2
/// is the minimum of H on that segment. The lower bound is min z, the upper
/// bound min w. Segments with equal z are ranked leftmost first.
class SawtoothState {
public:
    struct Segment {
        double left = 0.0;
        double left_value = 0.0;
        double right = 0.0;
        double right_value = 0.0;
        double crossing = 0.0;
        bool alive = true;

        double slope() const;
    };

    struct Proposal {
        std::size_t segment = 0;
        double point = 0.0;
        bool bisected = false;
    };

    /// Starts from the two endpoints a < b.
    SawtoothState(double lipschitz, double a, double wa, double b, double wb);

    double lipschitz() const noexcept { return lipschitz_; }
    double lower_bound() const;
    double upper_bound() const noexcept { return best_value_; }
    double best_point() const noexcept { return best_point_; }
    std::size_t point_count() const noexcept { return points_; }

    const Segment& segment(std::size_t index) const { return all_.at(index); }

    /// Alive segments in ascending order of position.
    std::vector<Segment> segments() const;

    /// Largest |dw/dy| between consecutive points; pairs with equal abscissae
    /// are skipped.
    double max_slope() const;

    /// Raises K and recomputes every crossing value. Returns false when k is
    /// not larger than the current constant.
    bool raise_lipschitz(double k);

    /// Next point, y = (y_l + y_r)/2 - (w_r - w_l)/(2K), in the segment with
    /// minimal z. A proposal outside the segment or within 1e-12 of an
    /// endpoint falls back to the midpoint. Empty when the best segment is
    /// too short to split.
    std::optional<Proposal> propose() const;

    /// Splits the proposal's segment at the evaluated point.
    void insert(const Proposal& p, double value);

private:
    using HeapEntry = std::tuple<double, double, std::size_t>;  // z, left, index
    using Heap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>>;

    double crossing(const Segment& s) const;
    void push(std::size_t index);
    void prune() const;

    double lipschitz_;
    std::vector<Segment> all_;
    mutable Heap heap_;
    std::size_t points_ = 2;
    double best_value_;
    double best_point_;
};

/// Dynamic Lipschitz update over consecutive evaluated points:
///     K = max(K_current, K_init, eta * max_j |w(y_j) - w(y_j-1)| / (y_j - y_j-1))
/// In Fixed mode the current constant is returned unchanged.
double update_lipschitz(const SawtoothState& state, const SolverConfig& cfg);

/// Minimizes a scalar function on [a, b]. Both endpoints are evaluated first.
/// Stops once u - l <= epsilon or the budget is spent (converged = false).
Solution minimize_1d(const std::function<double(double)>& fn, double a, double b,
                     const SolverConfig& cfg);

}  // namespace lipreach::lipopt
