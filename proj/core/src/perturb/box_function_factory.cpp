#include "lipreach/error.hpp"
#include "lipreach/perturb/objective.hpp"

namespace lipreach::perturb {

BoxFunction make_box_function(std::shared_ptr<const nnkit::Model> model, const PerturbationSpec& spec,
                              const Objective& objective) {
    if (!model) throw ContractError("make_box_function: null model");
    if (spec.dims.empty()) throw ContractError("perturbation has no perturbed coordinates");
    spec.validate(model->input_arity());
    objective.validate(*model);

    const double sign = objective.direction == Direction::Maximize ? -1.0 : 1.0;
    std::vector<Interval> box = spec.theta > 0.0 ? spec.box() : std::vector<Interval>{};

    auto evaluator = [model, spec, objective, sign, box](std::span<const double> free) {
        if (box.empty()) return sign * objective.evaluate(*model, spec.anchor);
        const Vector x = embed(spec, box, free);
        return sign * objective.evaluate(*model, x);
    };
    return BoxFunction(std::move(box), std::move(evaluator));
}

}  // namespace lipreach::perturb
