#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>

#include "lipreach/box_function.hpp"
#include "lipreach/nnkit/model.hpp"
#include "lipreach/perturb/objective.hpp"
#include "lipreach/perturb/perturbation.hpp"

namespace lipreach::perturb {

struct LipschitzEstimate {
    /// max over sampled pairs of |w(x1) - w(x2)| / ||x1 - x2||_inf.
    /// A lower bound on the best Lipschitz constant.
    double value = 0.0;
    /// The box is a single point; value is 0.
    bool degenerate = false;
    std::size_t samples = 0;
};

/// Uniform samples over fn's box, all pairs compared. Reproducible for a
/// fixed seed. Throws ContractError when samples < 2.
LipschitzEstimate sampled_lipschitz(const BoxFunction& fn, std::size_t samples, std::uint64_t seed);

LipschitzEstimate sampled_lipschitz(std::shared_ptr<const nnkit::Model> model,
                                    const Objective& objective, const PerturbationSpec& spec,
                                    std::size_t samples, std::uint64_t seed);

}  // namespace lipreach::perturb
