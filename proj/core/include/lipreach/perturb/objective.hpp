#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>

#include "lipreach/box_function.hpp"
#include "lipreach/nnkit/model.hpp"
#include "lipreach/perturb/perturbation.hpp"

namespace lipreach::perturb {

/// Generic term o applied to the network output.
///   confidence(j)    c_j = f(x)_j, the model output as-is
///   logit(j)         output with a trailing softmax layer stripped
///   difference(j,k)  c_j - c_k
enum class Term { Confidence, Logit, Difference };
enum class Direction { Minimize, Maximize };

struct Objective {
    Term term = Term::Confidence;
    std::size_t label = 0;
    std::size_t other = 0;
    Direction direction = Direction::Minimize;

    static Objective confidence(std::size_t j, Direction d = Direction::Minimize) {
        return {Term::Confidence, j, 0, d};
    }
    static Objective logit(std::size_t j, Direction d = Direction::Minimize) {
        return {Term::Logit, j, 0, d};
    }
    static Objective difference(std::size_t j, std::size_t k, Direction d = Direction::Minimize) {
        return {Term::Difference, j, k, d};
    }

    void validate(const nnkit::Model& model) const;

    /// o(f(x)), ignoring direction.
    double evaluate(const nnkit::Model& model, std::span<const double> input) const;
};

std::string to_string(Term term);
std::string to_string(Direction direction);

/// Builds w over the perturbed coordinate box. For Direction::Maximize the
/// evaluator returns -o so that minimizing w maximizes o. A zero radius
/// yields a zero-dimensional constant function (`is_constant()`).
BoxFunction make_box_function(std::shared_ptr<const nnkit::Model> model, const PerturbationSpec& spec,
                              const Objective& objective);

}  // namespace lipreach::perturb
