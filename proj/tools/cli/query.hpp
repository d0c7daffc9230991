#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "lipreach/lipopt/config.hpp"
#include "lipreach/nnkit/model.hpp"
#include "lipreach/perturb/objective.hpp"
#include "lipreach/perturb/perturbation.hpp"
#include "lipreach/verify/radius.hpp"

namespace lipreach::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kQueryFormatVersion = 1;

/// Command-line settings that take precedence over the query file.
struct Overrides {
    std::optional<verify::SafetyMode> mode;
    std::uint64_t seed = 0;
};

struct Query {
    std::filesystem::path model_path;
    std::shared_ptr<const nnkit::Model> model;
    perturb::PerturbationSpec spec;
    std::optional<perturb::Objective> objective;
    lipopt::SolverConfig solver;
    verify::RadiusOptions radius;
    verify::SafetyMode mode = verify::SafetyMode::Difference;
    /// Canonical, fully resolved copy of the query. Running it again gives
    /// the same result.
    Json echo;
};

/// Parses and resolves a query document. Relative model paths are resolved
/// against `base_dir`. Throws ParseError on malformed fields, ContractError
/// on values the model rejects.
Query parse_query(const Json& doc, const std::filesystem::path& base_dir, const Overrides& overrides);

Query load_query(const std::filesystem::path& path, const Overrides& overrides);

}  // namespace lipreach::cli
