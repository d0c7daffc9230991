#include "lipreach/perturb/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lipreach/error.hpp"

namespace lipreach::perturb {

void PerturbationSpec::validate(std::size_t input_arity) const {
    if (anchor.size() != input_arity) {
        throw ContractError("anchor has " + std::to_string(anchor.size()) +
                            " elements, model expects " + std::to_string(input_arity));
    }
    if (!(std::isfinite(theta) && theta >= 0.0)) throw ContractError("theta must be finite and >= 0");
    if (!(std::isfinite(clamp_lo) && std::isfinite(clamp_hi) && clamp_lo < clamp_hi)) {
        throw ContractError("clamp box must satisfy a < b");
    }
    std::set<std::size_t> seen;
    for (std::size_t d : dims) {
        if (d >= input_arity) {
            throw ContractError("perturbed index " + std::to_string(d) + " out of range");
        }
        if (!seen.insert(d).second) {
            throw ContractError("perturbed index " + std::to_string(d) + " repeated");
        }
    }
    for (std::size_t i = 0; i < anchor.size(); ++i) {
        if (!(anchor[i] >= clamp_lo && anchor[i] <= clamp_hi)) {
            throw ContractError("anchor coordinate " + std::to_string(i) + " lies outside the clamp box");
        }
    }
}

std::vector<Interval> PerturbationSpec::box() const {
    std::vector<Interval> out;
    out.reserve(dims.size());
    for (std::size_t d : dims) {
        out.push_back({std::max(clamp_lo, anchor[d] - theta), std::min(clamp_hi, anchor[d] + theta)});
    }
    return out;
}

Vector embed(const PerturbationSpec& spec, std::span<const Interval> box,
             std::span<const double> free) {
    Vector x = spec.anchor;
    for (std::size_t i = 0; i < free.size(); ++i) {
        x[spec.dims[i]] = std::clamp(free[i], box[i].lo, box[i].hi);
    }
    return x;
}

std::vector<double> project(const PerturbationSpec& spec) {
    std::vector<double> out;
    out.reserve(spec.dims.size());
    for (std::size_t d : spec.dims) out.push_back(spec.anchor[d]);
    return out;
}

double linf_distance(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace lipreach::perturb
