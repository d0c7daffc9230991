#include "lipreach/oracle/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "lipreach/error.hpp"

namespace lipreach::oracle {

namespace {

constexpr double kSlack = 1e-12;

/// Row-major decoding of a flat lattice index.
void decode(std::size_t index, const std::vector<std::vector<double>>& axes, std::vector<double>& out) {
    for (std::size_t d = axes.size(); d-- > 0;) {
        const std::size_t n = axes[d].size();
        out[d] = axes[d][index % n];
        index /= n;
    }
}

std::vector<std::vector<double>> lattice(const std::vector<Interval>& box, const GridSpec& grid) {
    const std::size_t total = grid_size(box, grid);
    if (total > grid.cap) {
        double widest = 0.0;
        for (const Interval& b : box) widest = std::max(widest, b.width());
        const double per_dim = std::pow(static_cast<double>(grid.cap), 1.0 / static_cast<double>(box.size()));
        std::ostringstream msg;
        msg << "grid of " << total << " points exceeds the cap of " << grid.cap << "; use step >= "
            << widest / std::max(1.0, std::floor(per_dim) - 1.0);
        throw ContractError(msg.str());
    }
    std::vector<std::vector<double>> axes;
    for (const Interval& b : box) axes.push_back(axis(b, grid));
    return axes;
}

}  // namespace

void GridSpec::validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) throw ContractError("grid step must be positive");
    if (cap == 0) throw ContractError("grid cap must be positive");
}

std::vector<double> axis(const Interval& range, const GridSpec& grid) {
    grid.validate();
    std::vector<double> out;
    const double span = range.width();
    const auto steps = static_cast<std::size_t>(std::floor(span / grid.step + kSlack));
    out.reserve(steps + 2);
    for (std::size_t i = 0; i <= steps; ++i) out.push_back(range.lo + static_cast<double>(i) * grid.step);
    if (grid.inclusive && range.hi - out.back() > kSlack * std::max(1.0, std::abs(range.hi))) {
        out.push_back(range.hi);
    }
    for (double& x : out) x = std::min(x, range.hi);
    return out;
}

std::size_t grid_size(const std::vector<Interval>& box, const GridSpec& grid) {
    grid.validate();
    double total = 1.0;
    for (const Interval& b : box) {
        total *= static_cast<double>(std::floor(b.width() / grid.step + kSlack) + 2.0);
        if (total > 1e18) return std::numeric_limits<std::size_t>::max();
    }
    std::size_t exact = 1;
    for (const Interval& b : box) exact *= axis(b, grid).size();
    return exact;
}

Extrema grid_extrema(const BoxFunction& fn, const GridSpec& grid, std::size_t threads) {
    const auto axes = lattice(fn.bounds(), grid);
    std::size_t total = 1;
    for (const auto& a : axes) total *= a.size();

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, total);

    std::vector<Extrema> partial(threads);
    auto work = [&](std::size_t t) {
        const std::size_t begin = total * t / threads;
        const std::size_t end = total * (t + 1) / threads;
        Extrema& e = partial[t];
        e.min_value = std::numeric_limits<double>::infinity();
        e.max_value = -std::numeric_limits<double>::infinity();
        std::vector<double> x(axes.size());
        for (std::size_t i = begin; i < end; ++i) {
            decode(i, axes, x);
            const double v = fn(x);
            if (v < e.min_value) {
                e.min_value = v;
                e.min_point = x;
            }
            if (v > e.max_value) {
                e.max_value = v;
                e.max_point = x;
            }
            ++e.points;
        }
    };

    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }

    Extrema out = partial[0];
    for (std::size_t t = 1; t < threads; ++t) {
        const Extrema& e = partial[t];
        if (e.min_value < out.min_value) {
            out.min_value = e.min_value;
            out.min_point = e.min_point;
        }
        if (e.max_value > out.max_value) {
            out.max_value = e.max_value;
            out.max_point = e.max_point;
        }
        out.points += e.points;
    }
    return out;
}

bool flips(std::span<const double> output, std::size_t original) {
    for (std::size_t k = 0; k < output.size(); ++k) {
        if (k != original && output[k] > output[original]) return true;
    }
    return false;
}

std::optional<FlipRadius> grid_flip_radius(const nnkit::Model& model,
                                           const perturb::PerturbationSpec& spec_template,
                                           const GridSpec& grid, double theta_step) {
    if (!(theta_step > 0.0)) throw ContractError("theta step must be positive");
    grid.validate();
    spec_template.validate(model.input_arity());
    if (spec_template.dims.empty()) throw ContractError("perturbation has no perturbed coordinates");

    const nnkit::Vector origin = model.forward(spec_template.anchor);
    if (!nnkit::unique_argmax(origin)) throw ContractError("anchor has a tied argmax");
    const std::size_t original = nnkit::argmax(origin);

    // Per dimension: anchor, then anchor -/+ i*step, then the clamp ends.
    std::vector<std::vector<double>> axes;
    std::size_t total = 1;
    for (std::size_t d : spec_template.dims) {
        const double x0 = spec_template.anchor[d];
        std::vector<double> a{x0};
        for (std::size_t i = 1;; ++i) {
            const double x = x0 - static_cast<double>(i) * grid.step;
            if (!(x > spec_template.clamp_lo)) break;
            a.push_back(x);
        }
        for (std::size_t i = 1;; ++i) {
            const double x = x0 + static_cast<double>(i) * grid.step;
            if (!(x < spec_template.clamp_hi)) break;
            a.push_back(x);
        }
        for (double end : {spec_template.clamp_lo, spec_template.clamp_hi}) {
            if (end != x0) a.push_back(end);
        }
        std::sort(a.begin(), a.end(), [x0](double l, double r) {
            const double dl = std::abs(l - x0), dr = std::abs(r - x0);
            return dl != dr ? dl < dr : l < r;
        });
        a.erase(std::unique(a.begin(), a.end()), a.end());
        total *= a.size();
        if (total > grid.cap) throw ContractError("flip-radius grid exceeds the cap of " + std::to_string(grid.cap) + " points");
        axes.push_back(std::move(a));
    }

    std::optional<FlipRadius> best;
    std::vector<double> free(axes.size());
    nnkit::Vector x = spec_template.anchor;
    for (std::size_t i = 0; i < total; ++i) {
        decode(i, axes, free);
        double distance = 0.0;
        for (std::size_t j = 0; j < free.size(); ++j) {
            x[spec_template.dims[j]] = free[j];
            distance = std::max(distance, std::abs(free[j] - spec_template.anchor[spec_template.dims[j]]));
        }
        if (best && distance >= best->distance) continue;
        const nnkit::Vector out = model.forward(x);
        if (!flips(out, original)) continue;
        FlipRadius r;
        r.distance = distance;
        r.witness = x;
        r.original_label = original;
        r.flipped_to = nnkit::argmax(out);
        best = std::move(r);
    }
    if (best) {
        best->theta = std::ceil(best->distance / theta_step - kSlack) * theta_step;
    }
    return best;
}

}  // namespace lipreach::oracle
