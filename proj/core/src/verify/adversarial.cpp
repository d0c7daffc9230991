#include "lipreach/verify/adversarial.hpp"

#include "lipreach/error.hpp"

namespace lipreach::verify {

AdversarialExample ground_truth_adversarial(const RadiusReport& report) {
    const RadiusProbe* best = nullptr;
    for (const TargetSearch& s : report.searches) {
        for (const RadiusProbe& p : s.history) {
            if (p.verdict != Verdict::Unsafe || !p.witness || !p.witness_output) continue;
            if (!best || p.theta < best->theta) best = &p;
        }
    }
    if (!best) throw NotFoundError("no unsafe probe with a witness in the radius report");

    AdversarialExample ex;
    ex.input = *best->witness;
    ex.output = *best->witness_output;
    ex.theta = best->theta;
    ex.distortion = perturb::linf_distance(ex.input, report.anchor);
    ex.original_label = report.original_label;
    ex.adversarial_label = nnkit::argmax(ex.output);
    ex.original_confidence = ex.output.at(ex.original_label);
    ex.adversarial_confidence = ex.output.at(ex.adversarial_label);
    return ex;
}

}  // namespace lipreach::verify
