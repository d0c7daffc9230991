#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "cli/query.hpp"

namespace lipreach::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 1,
    kUnsafe = 2,
    kBudget = 3,
    kUnknown = 4,
    kNotFound = 5,
};

struct Invocation {
    std::string command;
    std::filesystem::path query;
    std::optional<std::filesystem::path> out;
    std::optional<std::filesystem::path> trace;
    Overrides overrides;
};

struct Outcome {
    int exit_code = kOk;
    /// JSON report; null for the trace command unless --trace was also given.
    Json report;
    /// CSV of the bound trace (trace command, or the lower side of reach).
    std::string csv;
    std::string upper_csv;
};

/// Runs one subcommand on a parsed query.
Outcome execute(const std::string& command, const Query& query, bool with_traces);

/// Full command: load the query, execute, write outputs. Errors go to `err`
/// and map to kInputError.
int run(const Invocation& inv, std::ostream& out, std::ostream& err);

/// `<stem>.upper<ext>` next to the given path.
std::filesystem::path upper_trace_path(const std::filesystem::path& lower);

}  // namespace lipreach::cli
