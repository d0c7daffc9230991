#include "cli/commands.hpp"

#include <chrono>
#include <fstream>
#include <ostream>

#include "cli/report.hpp"
#include "lipreach/error.hpp"

namespace lipreach::cli {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << content;
    if (!f) throw Error("failed writing " + path.string());
}

const perturb::Objective& require_objective(const Query& q, const std::string& command) {
    if (!q.objective) throw ParseError("$.perturbation.objective", "required by '" + command + "'");
    return *q.objective;
}

}  // namespace

std::filesystem::path upper_trace_path(const std::filesystem::path& lower) {
    std::filesystem::path p = lower;
    p.replace_filename(lower.stem().string() + ".upper" + lower.extension().string());
    return p;
}

Outcome execute(const std::string& command, const Query& q, bool with_traces) {
    const auto start = std::chrono::steady_clock::now();
    const auto elapsed = [&] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    };
    const nnkit::Model& model = *q.model;
    Outcome o;

    if (command == "reach") {
        verify::ReachOutcome r = verify::reach(q.model, q.spec, require_objective(q, command), q.solver);
        Json traces = nullptr;
        if (with_traces) traces = Json{{"lower", trace_json(r.min_trace)}, {"upper", trace_json(r.max_trace)}};
        o.exit_code = r.interval.converged() ? kOk : kBudget;
        o.csv = r.min_trace.to_csv();
        o.upper_csv = r.max_trace.to_csv();
        o.report = make_report(command, q.echo, reach_json(model, r.interval), r.interval.evaluations, elapsed(),
                               std::move(traces));
    } else if (command == "trace") {
        const perturb::Objective& obj = require_objective(q, command);
        const verify::Side side =
            obj.direction == perturb::Direction::Maximize ? verify::Side::Upper : verify::Side::Lower;
        lipopt::BoundsTrace trace;
        const verify::ReachInterval r = verify::bound_one_side(q.model, q.spec, obj, q.solver, side, &trace);
        o.exit_code = r.converged() ? kOk : kBudget;
        o.csv = trace.to_csv();
        o.report = make_report(command, q.echo, reach_json(model, r), r.evaluations, elapsed(),
                               with_traces ? trace_json(trace) : Json(nullptr));
    } else if (command == "verify") {
        const verify::SafetyVerdict v = verify::check_safety(q.model, q.spec, q.solver, q.mode, q.radius.target);
        switch (v.verdict) {
            case verify::Verdict::Safe: o.exit_code = kOk; break;
            case verify::Verdict::Unsafe: o.exit_code = kUnsafe; break;
            case verify::Verdict::Unknown: o.exit_code = v.converged ? kUnknown : kBudget; break;
        }
        o.report = make_report(command, q.echo, verdict_json(model, v), v.evaluations, elapsed());
    } else if (command == "radius" || command == "witness") {
        const verify::RadiusReport r = verify::max_safe_radius(q.model, q.spec, q.solver, q.radius);
        Json result = radius_json(model, r);
        if (command == "witness") {
            try {
                result["witness"] = adversarial_json(model, verify::ground_truth_adversarial(r));
            } catch (const NotFoundError&) {
                result["witness"] = nullptr;
                o.exit_code = kNotFound;
            }
        }
        o.report = make_report(command, q.echo, std::move(result), r.evaluations(), elapsed());
    } else {
        throw ContractError("unknown command '" + command + "'");
    }
    return o;
}

int run(const Invocation& inv, std::ostream& out, std::ostream& err) {
    try {
        const Query q = load_query(inv.query, inv.overrides);
        const bool is_trace = inv.command == "trace";
        Outcome o = execute(inv.command, q, inv.trace.has_value() || is_trace);

        if (is_trace) {
            const auto csv_path = inv.trace ? inv.trace : inv.out;
            if (csv_path) {
                write_file(*csv_path, o.csv);
            } else {
                out << o.csv;
            }
            if (inv.trace && inv.out) write_file(*inv.out, o.report.dump(2) + "\n");
            return o.exit_code;
        }
        if (inv.trace && inv.command == "reach") {
            write_file(*inv.trace, o.csv);
            write_file(upper_trace_path(*inv.trace), o.upper_csv);
        }
        const std::string text = o.report.dump(2) + "\n";
        if (inv.out) {
            write_file(*inv.out, text);
        } else {
            out << text;
        }
        return o.exit_code;
    } catch (const Error& e) {
        err << "lipreach " << inv.command << ": " << e.what() << "\n";
    } catch (const nlohmann::json::exception& e) {
        err << "lipreach " << inv.command << ": " << e.what() << "\n";
    } catch (const std::filesystem::filesystem_error& e) {
        err << "lipreach " << inv.command << ": " << e.what() << "\n";
    }
    return kInputError;
}

}  // namespace lipreach::cli
