#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "lipreach/verify/safety.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Reachability and robustness verification of Lipschitz-continuous networks"};
    app.require_subcommand(1);

    lipreach::cli::Invocation inv;
    std::string mode;
    std::string query;
    std::string out;
    std::string trace;

    const std::pair<const char*, const char*> commands[] = {
        {"reach", "Reachable interval of an objective over the perturbation ball"},
        {"verify", "Safety verdict for the anchor's label"},
        {"radius", "Maximum safe radius by bisection"},
        {"witness", "Ground-truth adversarial example at the radius boundary"},
        {"trace", "CSV of the anytime bounds of a single solve"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--query", query, "Query JSON file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "Report path (stdout when omitted)");
        sub->add_option("--trace", trace, "Bound-trace CSV path");
        sub->add_option("--mode", mode, "Safety mode")->check(CLI::IsMember({"interval", "difference"}));
        sub->add_option("--seed", inv.overrides.seed, "Seed for sampled Lipschitz estimates");
        sub->callback([&inv, name = std::string(name)] { inv.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : lipreach::cli::kInputError;
    }

    inv.query = query;
    if (!out.empty()) inv.out = out;
    if (!trace.empty()) inv.trace = trace;
    if (!mode.empty()) inv.overrides.mode = lipreach::verify::parse_safety_mode(mode);
    return lipreach::cli::run(inv, std::cout, std::cerr);
}
