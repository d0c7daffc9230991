#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "lipreach/error.hpp"

namespace lipreach {

/// Closed interval [lo, hi] with lo <= hi.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const noexcept { return hi - lo; }
    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// A deterministic scalar function over an axis-aligned box. This is the
/// whole interface between a verification query and the optimizer: it never
/// exposes the network behind the evaluator.
///
/// Copies share one evaluation counter. The counter is atomic so independent
/// queries over the same function may run on separate threads.
class BoxFunction {
public:
    using Evaluator = std::function<double(std::span<const double>)>;

    BoxFunction(std::vector<Interval> bounds, Evaluator evaluator)
        : bounds_(std::move(bounds)),
          evaluator_(std::move(evaluator)),
          counter_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
        for (const Interval& b : bounds_) {
            if (!(b.lo <= b.hi)) throw ContractError("box function bound with lo > hi");
        }
        if (!evaluator_) throw ContractError("box function without evaluator");
    }

    std::size_t dimension() const noexcept { return bounds_.size(); }
    const std::vector<Interval>& bounds() const noexcept { return bounds_; }

    /// A zero-dimensional function is a constant.
    bool is_constant() const noexcept { return bounds_.empty(); }

    double operator()(std::span<const double> x) const {
        if (x.size() != bounds_.size()) {
            throw ContractError("box function called with " + std::to_string(x.size()) +
                                " coordinates, expected " + std::to_string(bounds_.size()));
        }
        counter_->fetch_add(1, std::memory_order_relaxed);
        return evaluator_(x);
    }

    std::uint64_t eval_count() const noexcept { return counter_->load(std::memory_order_relaxed); }

private:
    std::vector<Interval> bounds_;
    Evaluator evaluator_;
    std::shared_ptr<std::atomic<std::uint64_t>> counter_;
};

inline std::uint64_t eval_count(const BoxFunction& fn) noexcept { return fn.eval_count(); }

}  // namespace lipreach
