#include "lipreach/perturb/lipschitz_estimate.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace lipreach::perturb {

LipschitzEstimate sampled_lipschitz(const BoxFunction& fn, std::size_t samples, std::uint64_t seed) {
    if (samples < 2) throw ContractError("sampled_lipschitz needs at least 2 samples");
    LipschitzEstimate est;
    est.samples = samples;

    const auto& bounds = fn.bounds();
    const bool single_point = std::all_of(bounds.begin(), bounds.end(),
                                          [](const Interval& b) { return !(b.width() > 0.0); });
    if (single_point) {
        est.degenerate = true;
        return est;
    }

    const std::size_t n = bounds.size();
    std::mt19937_64 rng(seed);
    std::vector<double> points(samples * n);
    std::vector<double> values(samples);
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t d = 0; d < n; ++d) {
            std::uniform_real_distribution<double> dist(bounds[d].lo, bounds[d].hi);
            points[s * n + d] = dist(rng);
        }
        values[s] = fn(std::span(points).subspan(s * n, n));
    }

    for (std::size_t i = 0; i < samples; ++i) {
        const auto xi = std::span(points).subspan(i * n, n);
        for (std::size_t j = i + 1; j < samples; ++j) {
            const double dist = linf_distance(xi, std::span(points).subspan(j * n, n));
            if (dist > 0.0) est.value = std::max(est.value, std::abs(values[i] - values[j]) / dist);
        }
    }
    return est;
}

LipschitzEstimate sampled_lipschitz(std::shared_ptr<const nnkit::Model> model,
                                    const Objective& objective, const PerturbationSpec& spec,
                                    std::size_t samples, std::uint64_t seed) {
    if (samples < 2) throw ContractError("sampled_lipschitz needs at least 2 samples");
    if (spec.theta == 0.0) {
        LipschitzEstimate est;
        est.degenerate = true;
        est.samples = samples;
        return est;
    }
    return sampled_lipschitz(make_box_function(std::move(model), spec, objective), samples, seed);
}

}  // namespace lipreach::perturb
