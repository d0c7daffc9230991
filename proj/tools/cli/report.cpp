#include "cli/report.hpp"

namespace lipreach::cli {

namespace {

Json optional_vector(const std::optional<nnkit::Vector>& v) {
    return v ? Json(*v) : Json(nullptr);
}

}  // namespace

Json label_json(const nnkit::Model& model, std::size_t index) {
    return Json{{"index", index}, {"name", model.labels().at(index)}};
}

Json trace_json(const lipopt::BoundsTrace& trace) {
    Json rows = Json::array();
    for (const auto& r : trace.records) {
        rows.push_back({r.iteration, r.lower, r.upper, r.point, r.value, r.lipschitz});
    }
    return Json{{"columns", {"iter", "l", "u", "y", "w", "K"}},
                {"negated", trace.negated},
                {"budget_exhausted", trace.budget_exhausted},
                {"rows", rows}};
}

Json reach_json(const nnkit::Model& model, const verify::ReachInterval& r) {
    Json labels = Json::array({label_json(model, r.objective.label)});
    if (r.objective.term == perturb::Term::Difference) labels.push_back(label_json(model, r.objective.other));
    return Json{{"objective", {{"kind", perturb::to_string(r.objective.term)}, {"labels", labels}}},
                {"lower", r.lower},
                {"upper", r.upper},
                {"diameter", r.diameter()},
                {"tolerance", r.tolerance},
                {"lower_converged", r.lower_converged},
                {"upper_converged", r.upper_converged},
                {"evaluations", r.evaluations},
                {"attained_min", r.attained_min},
                {"attained_max", r.attained_max},
                {"argmin", r.argmin},
                {"argmax", r.argmax}};
}

Json verdict_json(const nnkit::Model& model, const verify::SafetyVerdict& v) {
    Json targets = Json::array();
    for (const auto& t : v.targets) {
        targets.push_back({{"label", label_json(model, t.label)},
                           {"lower", t.bound.lower},
                           {"upper", t.bound.upper},
                           {"tolerance", t.bound.tolerance},
                           {"converged", t.bound.lower_converged && t.bound.upper_converged},
                           {"evaluations", t.bound.evaluations}});
    }
    Json out{{"verdict", verify::to_string(v.verdict)},
             {"mode", verify::to_string(v.mode)},
             {"margin", v.margin},
             {"original_label", label_json(model, v.original_label)},
             {"witness", optional_vector(v.witness)},
             {"flipped_to", v.flipped_to ? label_json(model, *v.flipped_to) : Json(nullptr)},
             {"converged", v.converged},
             {"evaluations", v.evaluations}};
    if (v.original) {
        out["original"] = {{"lower", v.original->lower},
                           {"tolerance", v.original->tolerance},
                           {"attained_min", v.original->attained_min}};
    }
    out["targets"] = targets;
    return out;
}

Json radius_json(const nnkit::Model& model, const verify::RadiusReport& r) {
    Json searches = Json::array();
    for (const auto& s : r.searches) {
        Json history = Json::array();
        for (const auto& p : s.history) {
            history.push_back({{"theta", p.theta},
                               {"verdict", verify::to_string(p.verdict)},
                               {"margin", p.margin},
                               {"lower", p.lower},
                               {"upper", p.upper},
                               {"witness", optional_vector(p.witness)},
                               {"witness_output", optional_vector(p.witness_output)},
                               {"evaluations", p.evaluations}});
        }
        searches.push_back({{"target", label_json(model, s.target)},
                            {"r", s.r},
                            {"stop", verify::to_string(s.stop)},
                            {"iterations", s.history.size()},
                            {"history", history}});
    }
    return Json{{"r", r.r},
                {"original_label", label_json(model, r.original_label)},
                {"determining_target", label_json(model, r.determining_target)},
                {"mode", verify::to_string(r.mode)},
                {"anchor", r.anchor},
                {"dims", r.dims},
                {"clamp", {r.clamp_lo, r.clamp_hi}},
                {"iterations", r.iterations()},
                {"notes", r.notes},
                {"searches", searches}};
}

Json adversarial_json(const nnkit::Model& model, const verify::AdversarialExample& a) {
    return Json{{"input", a.input},
                {"distortion", a.distortion},
                {"theta", a.theta},
                {"original_label", label_json(model, a.original_label)},
                {"adversarial_label", label_json(model, a.adversarial_label)},
                {"original_confidence", a.original_confidence},
                {"adversarial_confidence", a.adversarial_confidence},
                {"output", a.output}};
}

Json make_report(const std::string& command, const Json& query, Json result, std::size_t evals,
                 double wall_ms, Json traces) {
    Json report{{"format_version", kReportFormatVersion},
                {"command", command},
                {"query", query},
                {"result", std::move(result)},
                {"cost", {{"evals", evals}, {"wall_ms", wall_ms}}}};
    if (!traces.is_null()) report["traces"] = std::move(traces);
    return report;
}

}  // namespace lipreach::cli
