#include "lipreach/perturb/objective.hpp"

#include "lipreach/error.hpp"

namespace lipreach::perturb {

void Objective::validate(const nnkit::Model& model) const {
    const std::size_t m = model.output_arity();
    if (label >= m) throw ContractError("objective label index " + std::to_string(label) + " out of range");
    if (term == Term::Difference) {
        if (other >= m) {
            throw ContractError("objective label index " + std::to_string(other) + " out of range");
        }
        if (other == label) throw ContractError("difference objective needs two distinct labels");
    }
}

double Objective::evaluate(const nnkit::Model& model, std::span<const double> input) const {
    switch (term) {
        case Term::Confidence: return model.forward(input)[label];
        case Term::Logit: return model.logits(input)[label];
        case Term::Difference: {
            const auto c = model.forward(input);
            return c[label] - c[other];
        }
    }
    return 0.0;
}

std::string to_string(Term term) {
    switch (term) {
        case Term::Confidence: return "confidence";
        case Term::Logit: return "logit";
        case Term::Difference: return "difference";
    }
    return "confidence";
}

std::string to_string(Direction direction) {
    return direction == Direction::Maximize ? "maximize" : "minimize";
}

}  // namespace lipreach::perturb
