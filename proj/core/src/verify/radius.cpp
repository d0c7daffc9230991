#include "lipreach/verify/radius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lipreach/error.hpp"

namespace lipreach::verify {

namespace {

enum class Step { Grow, Shrink, Meet };

RadiusProbe probe(const std::shared_ptr<const nnkit::Model>& model, const perturb::PerturbationSpec& tmpl,
                  double theta, const lipopt::SolverConfig& cfg, SafetyMode mode, std::size_t target) {
    const SafetyVerdict v = check_safety(model, tmpl.with_theta(theta), cfg, mode, target);
    RadiusProbe p;
    p.theta = theta;
    p.verdict = v.verdict;
    p.margin = v.margin;
    p.evaluations = v.evaluations;
    const ReachInterval& competitor = v.targets.front().bound;
    if (mode == SafetyMode::Interval) {
        p.lower = v.original->lower - v.original->tolerance;
        p.upper = competitor.upper + competitor.tolerance;
    } else {
        p.lower = competitor.lower;
        p.upper = competitor.upper;
    }
    if (v.witness) {
        p.witness = v.witness;
        p.witness_output = model->forward(*v.witness);
    }
    return p;
}

Step classify(const RadiusProbe& p, double eps) {
    if (p.verdict == Verdict::Safe) return Step::Grow;
    if (p.verdict == Verdict::Unsafe || p.margin < -eps) return Step::Shrink;
    return Step::Meet;
}

TargetSearch search(const std::shared_ptr<const nnkit::Model>& model, const perturb::PerturbationSpec& tmpl,
                    const lipopt::SolverConfig& cfg, const RadiusOptions& options, std::size_t target) {
    TargetSearch s;
    s.target = target;
    const double full = tmpl.clamp_hi - tmpl.clamp_lo;

    s.history.push_back(probe(model, tmpl, full, cfg, options.mode, target));
    switch (classify(s.history.back(), cfg.epsilon)) {
        case Step::Grow:
            s.r = full;
            s.stop = StopReason::NeverUnsafe;
            return s;
        case Step::Meet:
            s.r = full;
            s.stop = StopReason::Meet;
            return s;
        case Step::Shrink:
            break;
    }

    double lo = 0.0;
    double hi = full;
    s.stop = StopReason::MaxIters;
    while (s.history.size() < options.max_iters) {
        if (hi - lo <= options.radius_tol) {
            s.stop = StopReason::Width;
            break;
        }
        const double theta = 0.5 * (lo + hi);
        s.history.push_back(probe(model, tmpl, theta, cfg, options.mode, target));
        const Step step = classify(s.history.back(), cfg.epsilon);
        if (step == Step::Meet) {
            s.r = theta;
            s.stop = StopReason::Meet;
            return s;
        }
        (step == Step::Grow ? lo : hi) = theta;
    }
    if (s.stop == StopReason::MaxIters && hi - lo <= options.radius_tol) s.stop = StopReason::Width;
    s.r = 0.5 * (lo + hi);
    return s;
}

}  // namespace

void RadiusOptions::validate() const {
    if (max_iters < 1) throw ContractError("max_iters must be at least 1");
    if (!(radius_tol > 0.0)) throw ContractError("radius_tol must be positive");
}

std::string to_string(StopReason reason) {
    switch (reason) {
        case StopReason::Meet: return "meet";
        case StopReason::Width: return "width";
        case StopReason::MaxIters: return "max_iters";
        case StopReason::NeverUnsafe: return "never_unsafe";
    }
    return "max_iters";
}

std::size_t RadiusReport::iterations() const noexcept {
    std::size_t n = 0;
    for (const TargetSearch& s : searches) n += s.history.size();
    return n;
}

std::size_t RadiusReport::evaluations() const noexcept {
    std::size_t n = 0;
    for (const TargetSearch& s : searches) {
        for (const RadiusProbe& p : s.history) n += p.evaluations;
    }
    return n;
}

RadiusReport max_safe_radius(std::shared_ptr<const nnkit::Model> model,
                             const perturb::PerturbationSpec& spec_template,
                             const lipopt::SolverConfig& cfg, const RadiusOptions& options) {
    if (!model) throw ContractError("max_safe_radius: null model");
    options.validate();
    cfg.validate();
    spec_template.validate(model->input_arity());
    if (spec_template.dims.empty()) throw ContractError("perturbation has no perturbed coordinates");

    RadiusReport report;
    report.mode = options.mode;
    report.anchor = spec_template.anchor;
    report.dims = spec_template.dims;
    report.clamp_lo = spec_template.clamp_lo;
    report.clamp_hi = spec_template.clamp_hi;
    report.original_label = anchor_label(*model, spec_template.anchor);
    if (options.declared_label && *options.declared_label != report.original_label) {
        report.notes.push_back("anchor is classified as " + model->labels()[report.original_label] +
                               ", not the declared " + model->labels().at(*options.declared_label) +
                               "; using the model's label");
    }

    std::vector<std::size_t> targets;
    if (options.target) {
        if (*options.target >= model->output_arity()) throw ContractError("target label out of range");
        if (*options.target == report.original_label) {
            throw ContractError("target label equals the anchor's label");
        }
        targets.push_back(*options.target);
    } else {
        for (std::size_t k = 0; k < model->output_arity(); ++k) {
            if (k != report.original_label) targets.push_back(k);
        }
    }

    report.r = std::numeric_limits<double>::infinity();
    for (std::size_t k : targets) {
        TargetSearch s = search(model, spec_template, cfg, options, k);
        if (s.r < report.r) {
            report.r = s.r;
            report.determining_target = k;
        }
        report.searches.push_back(std::move(s));
    }
    const bool never_unsafe = std::all_of(report.searches.begin(), report.searches.end(), [](const TargetSearch& s) {
        return s.stop == StopReason::NeverUnsafe;
    });
    if (never_unsafe) report.notes.push_back("safe over the whole clamp box; r = b - a");
    return report;
}

}  // namespace lipreach::verify
