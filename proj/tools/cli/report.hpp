#pragma once

#include <cstddef>
#include <string>

#include "cli/query.hpp"
#include "lipreach/lipopt/trace.hpp"
#include "lipreach/verify/adversarial.hpp"
#include "lipreach/verify/radius.hpp"
#include "lipreach/verify/reach.hpp"
#include "lipreach/verify/safety.hpp"

namespace lipreach::cli {

inline constexpr int kReportFormatVersion = 1;

Json label_json(const nnkit::Model& model, std::size_t index);
Json trace_json(const lipopt::BoundsTrace& trace);
Json reach_json(const nnkit::Model& model, const verify::ReachInterval& r);
Json verdict_json(const nnkit::Model& model, const verify::SafetyVerdict& v);
Json radius_json(const nnkit::Model& model, const verify::RadiusReport& r);
Json adversarial_json(const nnkit::Model& model, const verify::AdversarialExample& a);

/// {format_version, command, query, result, cost{evals, wall_ms}}; `traces`
/// is added only when not null.
Json make_report(const std::string& command, const Json& query, Json result, std::size_t evals,
                 double wall_ms, Json traces = nullptr);

}  // namespace lipreach::cli
