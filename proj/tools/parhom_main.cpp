#include "parhom/scenario.hpp"
#include "parhom/version.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"parhom: verification workbench for parallel-submanifold homogeneity "
                 "in symmetric spaces"};
    app.set_version_flag("--version", parhom::kVersion);
    app.require_subcommand(1);

    std::string scenario_path, output_path, format = "json", tolerances_path, report_path;
    std::uint64_t seed = 0;

    auto* run_cmd = app.add_subcommand("run", "evaluate a scenario file");
    run_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run_cmd->add_option("--output", output_path, "output path (default: stdout)");
    run_cmd->add_option("--format", format, "json | text")
        ->check(CLI::IsMember({"json", "text"}));
    run_cmd->add_option("--seed", seed, "default RNG seed");
    run_cmd->add_option("--tolerances", tolerances_path, "tolerance override JSON file");

    auto* catalog_cmd = app.add_subcommand("catalog", "list built-in models");

    auto* explain_cmd = app.add_subcommand("explain", "narrate a JSON report");
    explain_cmd->add_option("report", report_path, "report JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    parhom::Tolerances tol;
    if (!tolerances_path.empty()) {
        try {
            std::ifstream in(tolerances_path);
            if (!in) throw parhom::ParseError("cannot open tolerances file");
            parhom::Json doc = parhom::Json::parse(in);
            tol = parhom::tolerances_from_json(doc, tol);
        } catch (const std::exception& e) {
            std::cerr << "parse error: " << e.what() << "\n";
            return 2;
        }
    }

    if (run_cmd->parsed()) return parhom::run(scenario_path, output_path, format, tol, seed, std::cout);

    if (catalog_cmd->parsed()) {
        std::cout << parhom::catalog_table(tol);
        return 0;
    }

    if (explain_cmd->parsed()) {
        try {
            std::ifstream in(report_path);
            if (!in) throw parhom::ParseError("cannot open report file: " + report_path);
            parhom::Json doc = parhom::Json::parse(in);
            std::cout << parhom::explain_report(doc);
            return 0;
        } catch (const std::exception& e) {
            std::cerr << "parse error: " << e.what() << "\n";
            return 2;
        }
    }
    return 0;
}
