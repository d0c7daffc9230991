#include "cli/query.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <limits>

#include "lipreach/error.hpp"
#include "lipreach/nnkit/model_io.hpp"
#include "lipreach/perturb/lipschitz_estimate.hpp"
#include "lipreach/verify/safety.hpp"

namespace lipreach::cli {

namespace {

constexpr std::size_t kLipschitzSamples = 1000;
constexpr double kMinSampledLipschitz = 1e-6;

void only_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ParseError(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            throw ParseError(path + "." + key, "unknown field");
        }
    }
}

const Json& field(const Json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) throw ParseError(path + "." + key, "missing field");
    return obj.at(key);
}

double number(const Json& v, const std::string& path) {
    if (!v.is_number()) throw ParseError(path, "expected a number");
    return v.get<double>();
}

std::size_t count(const Json& v, const std::string& path) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw ParseError(path, "expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

std::string text(const Json& v, const std::string& path) {
    if (!v.is_string()) throw ParseError(path, "expected a string");
    return v.get<std::string>();
}

std::size_t label(const nnkit::Model& model, const Json& v, const std::string& path) {
    if (v.is_string()) return model.label_index(v.get<std::string>());
    const std::size_t i = count(v, path);
    if (i >= model.output_arity()) {
        throw ContractError("label index " + std::to_string(i) + " out of range at " + path);
    }
    return i;
}

perturb::Objective parse_objective(const nnkit::Model& model, const Json& j, const std::string& path) {
    only_keys(j, path, {"kind", "labels", "direction"});
    const std::string kind = text(field(j, path, "kind"), path + ".kind");
    const Json& labels = field(j, path, "labels");
    if (!labels.is_array()) throw ParseError(path + ".labels", "expected an array");
    std::string direction = "minimize";
    if (j.contains("direction")) direction = text(j.at("direction"), path + ".direction");

    perturb::Direction d;
    if (direction == "minimize") {
        d = perturb::Direction::Minimize;
    } else if (direction == "maximize") {
        d = perturb::Direction::Maximize;
    } else {
        throw ParseError(path + ".direction", "expected minimize or maximize");
    }

    const std::size_t want = kind == "difference" ? 2 : 1;
    if (labels.size() != want) {
        throw ParseError(path + ".labels", "kind '" + kind + "' takes " + std::to_string(want) + " label(s)");
    }
    const std::size_t j0 = label(model, labels[0], path + ".labels[0]");
    perturb::Objective o;
    if (kind == "confidence") {
        o = perturb::Objective::confidence(j0, d);
    } else if (kind == "logit") {
        o = perturb::Objective::logit(j0, d);
    } else if (kind == "difference") {
        o = perturb::Objective::difference(j0, label(model, labels[1], path + ".labels[1]"), d);
    } else {
        throw ParseError(path + ".kind", "expected confidence, logit or difference");
    }
    o.validate(model);
    return o;
}

Json objective_json(const nnkit::Model& model, const perturb::Objective& o) {
    Json labels = Json::array({model.labels()[o.label]});
    if (o.term == perturb::Term::Difference) labels.push_back(model.labels()[o.other]);
    return Json{{"kind", perturb::to_string(o.term)},
                {"labels", labels},
                {"direction", perturb::to_string(o.direction)}};
}

double sampled_k(const Query& q, std::uint64_t seed) {
    std::vector<perturb::Objective> objectives;
    if (q.objective) {
        objectives.push_back(*q.objective);
    } else {
        const std::size_t orig = verify::anchor_label(*q.model, q.spec.anchor);
        for (std::size_t k = 0; k < q.model->output_arity(); ++k) {
            if (k != orig) objectives.push_back(perturb::Objective::difference(orig, k));
        }
    }
    perturb::PerturbationSpec spec = q.spec;
    if (spec.theta == 0.0) spec.theta = spec.clamp_hi - spec.clamp_lo;
    double estimate = 0.0;
    for (const auto& o : objectives) {
        estimate = std::max(estimate,
                            perturb::sampled_lipschitz(q.model, o, spec, kLipschitzSamples, seed).value);
    }
    return std::max(q.solver.eta * estimate, kMinSampledLipschitz);
}

}  // namespace

Query parse_query(const Json& doc, const std::filesystem::path& base_dir, const Overrides& overrides) {
    const std::string root = "$";
    only_keys(doc, root, {"format_version", "model", "perturbation", "solver", "radius", "mode"});
    const Json& version = field(doc, root, "format_version");
    if (!version.is_number_integer() || version.get<long long>() != kQueryFormatVersion) {
        throw ParseError("$.format_version", "expected " + std::to_string(kQueryFormatVersion));
    }

    Query q;
    std::filesystem::path model_path = text(field(doc, root, "model"), "$.model");
    if (model_path.is_relative()) model_path = base_dir / model_path;
    q.model_path = std::filesystem::weakly_canonical(model_path);
    q.model = std::make_shared<const nnkit::Model>(nnkit::load_model(q.model_path));
    const nnkit::Model& model = *q.model;

    const std::string pp = "$.perturbation";
    const Json& p = field(doc, root, "perturbation");
    only_keys(p, pp, {"anchor", "dims", "theta", "clamp", "objective"});
    const Json& anchor = field(p, pp, "anchor");
    if (!anchor.is_array()) throw ParseError(pp + ".anchor", "expected an array");
    for (std::size_t i = 0; i < anchor.size(); ++i) {
        q.spec.anchor.push_back(number(anchor[i], pp + ".anchor[" + std::to_string(i) + "]"));
    }
    const Json& dims = field(p, pp, "dims");
    if (!dims.is_array()) throw ParseError(pp + ".dims", "expected an array");
    for (std::size_t i = 0; i < dims.size(); ++i) {
        q.spec.dims.push_back(count(dims[i], pp + ".dims[" + std::to_string(i) + "]"));
    }
    if (p.contains("theta")) q.spec.theta = number(p.at("theta"), pp + ".theta");
    if (p.contains("clamp")) {
        const Json& c = p.at("clamp");
        if (!c.is_array() || c.size() != 2) throw ParseError(pp + ".clamp", "expected [a, b]");
        q.spec.clamp_lo = number(c[0], pp + ".clamp[0]");
        q.spec.clamp_hi = number(c[1], pp + ".clamp[1]");
    }
    q.spec.validate(model.input_arity());
    if (q.spec.dims.empty()) throw ParseError(pp + ".dims", "at least one coordinate must be perturbed");
    if (p.contains("objective")) q.objective = parse_objective(model, p.at("objective"), pp + ".objective");

    bool sampled = false;
    if (doc.contains("solver")) {
        const std::string sp = "$.solver";
        const Json& s = doc.at("solver");
        only_keys(s, sp, {"epsilon", "eta", "k_init", "max_evals", "lipschitz", "inner_epsilon"});
        if (s.contains("epsilon")) q.solver.epsilon = number(s.at("epsilon"), sp + ".epsilon");
        if (s.contains("eta")) q.solver.eta = number(s.at("eta"), sp + ".eta");
        if (s.contains("k_init")) {
            const Json& k = s.at("k_init");
            if (k.is_string() && k.get<std::string>() == "sampled") {
                sampled = true;
            } else {
                q.solver.k_init = number(k, sp + ".k_init");
            }
        }
        if (s.contains("max_evals")) q.solver.max_evals = count(s.at("max_evals"), sp + ".max_evals");
        if (s.contains("lipschitz")) {
            const std::string mode = text(s.at("lipschitz"), sp + ".lipschitz");
            if (mode == "dynamic") {
                q.solver.mode = lipopt::LipschitzMode::Dynamic;
            } else if (mode == "fixed") {
                q.solver.mode = lipopt::LipschitzMode::Fixed;
            } else {
                throw ParseError(sp + ".lipschitz", "expected dynamic or fixed");
            }
        }
        if (s.contains("inner_epsilon")) {
            const Json& e = s.at("inner_epsilon");
            if (e.is_string() && e.get<std::string>() == "equal-split") {
                q.solver.inner = lipopt::InnerTolerance::equal_split();
            } else {
                q.solver.inner = lipopt::InnerTolerance::fixed(number(e, sp + ".inner_epsilon"));
            }
        }
    }

    if (doc.contains("radius")) {
        const std::string rp = "$.radius";
        const Json& r = doc.at("radius");
        only_keys(r, rp, {"target", "max_iters", "radius_tol", "declared_label"});
        if (r.contains("target")) {
            const Json& t = r.at("target");
            if (!(t.is_string() && t.get<std::string>() == "all")) q.radius.target = label(model, t, rp + ".target");
        }
        if (r.contains("max_iters")) q.radius.max_iters = count(r.at("max_iters"), rp + ".max_iters");
        if (r.contains("radius_tol")) q.radius.radius_tol = number(r.at("radius_tol"), rp + ".radius_tol");
        if (r.contains("declared_label")) {
            q.radius.declared_label = label(model, r.at("declared_label"), rp + ".declared_label");
        }
        q.radius.validate();
    }

    if (doc.contains("mode")) q.mode = verify::parse_safety_mode(text(doc.at("mode"), "$.mode"));
    if (overrides.mode) q.mode = *overrides.mode;
    q.radius.mode = q.mode;

    if (sampled) q.solver.k_init = sampled_k(q, overrides.seed);
    q.solver.validate();

    Json perturbation{{"anchor", q.spec.anchor},
                      {"dims", q.spec.dims},
                      {"theta", q.spec.theta},
                      {"clamp", {q.spec.clamp_lo, q.spec.clamp_hi}}};
    if (q.objective) perturbation["objective"] = objective_json(model, *q.objective);
    Json inner = q.solver.inner.rule == lipopt::InnerTolerance::Rule::EqualSplit ? Json("equal-split")
                                                                                 : Json(q.solver.inner.value);
    Json radius{{"target", q.radius.target ? Json(model.labels()[*q.radius.target]) : Json("all")},
                {"max_iters", q.radius.max_iters},
                {"radius_tol", q.radius.radius_tol}};
    if (q.radius.declared_label) radius["declared_label"] = model.labels()[*q.radius.declared_label];
    q.echo = Json{{"format_version", kQueryFormatVersion},
                  {"model", q.model_path.string()},
                  {"perturbation", perturbation},
                  {"solver",
                   {{"epsilon", q.solver.epsilon},
                    {"eta", q.solver.eta},
                    {"k_init", q.solver.k_init},
                    {"max_evals", q.solver.max_evals},
                    {"lipschitz", q.solver.mode == lipopt::LipschitzMode::Dynamic ? "dynamic" : "fixed"},
                    {"inner_epsilon", inner}}},
                  {"radius", radius},
                  {"mode", verify::to_string(q.mode)}};
    return q;
}

Query load_query(const std::filesystem::path& path, const Overrides& overrides) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), "cannot open query file");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string(), e.what());
    }
    return parse_query(doc, path.parent_path(), overrides);
}

}  // namespace lipreach::cli
