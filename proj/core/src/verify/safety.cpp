#include "lipreach/verify/safety.hpp"

#include <algorithm>
#include <limits>

#include "lipreach/error.hpp"

namespace lipreach::verify {

namespace {

bool flips(const Vector& output, std::size_t original) {
    for (std::size_t k = 0; k < output.size(); ++k) {
        if (k != original && output[k] > output[original]) return true;
    }
    return false;
}

std::vector<std::size_t> competitors(const nnkit::Model& model, std::size_t original,
                                     std::optional<std::size_t> target) {
    if (target) {
        if (*target >= model.output_arity()) throw ContractError("target label out of range");
        if (*target == original) throw ContractError("target label equals the anchor's label");
        return {*target};
    }
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < model.output_arity(); ++k) {
        if (k != original) out.push_back(k);
    }
    return out;
}

void mark_unsafe(SafetyVerdict& v, const nnkit::Model& model, const Vector& witness) {
    v.verdict = Verdict::Unsafe;
    v.witness = witness;
    v.flipped_to = nnkit::argmax(model.forward(witness));
}

}  // namespace

std::string to_string(SafetyMode mode) {
    return mode == SafetyMode::Interval ? "interval" : "difference";
}

std::string to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Safe: return "safe";
        case Verdict::Unsafe: return "unsafe";
        case Verdict::Unknown: return "unknown";
    }
    return "unknown";
}

SafetyMode parse_safety_mode(const std::string& text) {
    if (text == "interval") return SafetyMode::Interval;
    if (text == "difference") return SafetyMode::Difference;
    throw ContractError("unknown safety mode '" + text + "' (expected interval or difference)");
}

std::size_t anchor_label(const nnkit::Model& model, const Vector& anchor) {
    const Vector out = model.forward(anchor);
    if (!nnkit::unique_argmax(out)) throw ContractError("anchor has a tied argmax");
    return nnkit::argmax(out);
}

SafetyVerdict check_safety(std::shared_ptr<const nnkit::Model> model, const perturb::PerturbationSpec& spec,
                           const lipopt::SolverConfig& cfg, SafetyMode mode,
                           std::optional<std::size_t> target) {
    if (!model) throw ContractError("check_safety: null model");
    spec.validate(model->input_arity());
    const double eps = cfg.epsilon;

    SafetyVerdict v;
    v.mode = mode;
    v.original_label = anchor_label(*model, spec.anchor);
    const std::size_t orig = v.original_label;
    const auto labels = competitors(*model, orig, target);

    if (mode == SafetyMode::Difference) {
        v.margin = std::numeric_limits<double>::infinity();
        std::optional<std::size_t> worst;
        for (std::size_t k : labels) {
            ReachInterval b = bound_one_side(model, spec, perturb::Objective::difference(orig, k), cfg,
                                             Side::Lower);
            v.evaluations += b.evaluations;
            v.converged = v.converged && b.lower_converged;
            v.margin = std::min(v.margin, b.lower - b.tolerance);
            if (b.attained_min < -eps && (!worst || b.attained_min < v.targets[*worst].bound.attained_min)) {
                worst = v.targets.size();
            }
            v.targets.push_back({k, std::move(b)});
        }
        if (worst) {
            mark_unsafe(v, *model, v.targets[*worst].bound.argmin);
        } else {
            v.verdict = v.margin > eps ? Verdict::Safe : Verdict::Unknown;
        }
        return v;
    }

    ReachInterval low = bound_one_side(model, spec, perturb::Objective::confidence(orig), cfg, Side::Lower);
    v.evaluations += low.evaluations;
    v.converged = low.lower_converged;
    double highest = -std::numeric_limits<double>::infinity();
    for (std::size_t k : labels) {
        ReachInterval b = bound_one_side(model, spec, perturb::Objective::confidence(k), cfg, Side::Upper);
        v.evaluations += b.evaluations;
        v.converged = v.converged && b.upper_converged;
        highest = std::max(highest, b.upper + b.tolerance);
        v.targets.push_back({k, std::move(b)});
    }
    v.margin = (low.lower - low.tolerance) - highest;
    v.original = std::move(low);
    if (v.margin > eps) {
        v.verdict = Verdict::Safe;
        return v;
    }
    v.verdict = Verdict::Unknown;
    if (flips(model->forward(v.original->argmin), orig)) {
        mark_unsafe(v, *model, v.original->argmin);
        return v;
    }
    for (const TargetBound& t : v.targets) {
        if (flips(model->forward(t.bound.argmax), orig)) {
            mark_unsafe(v, *model, t.bound.argmax);
            return v;
        }
    }
    return v;
}

}  // namespace lipreach::verify
