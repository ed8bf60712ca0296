// Command-line front end: run, twin, check and export.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "pem/allocator.hpp"
#include "pem/errors.hpp"
#include "pem/experiment.hpp"
#include "pem/series_io.hpp"

namespace {

struct Overrides {
    std::string output_dir;
    std::optional<std::uint64_t> seed;
};

pem::ScenarioConfig load(const std::string& path, const Overrides& o) {
    auto cfg = pem::load_config(path);
    if (!o.output_dir.empty()) cfg.output_dir = o.output_dir;
    if (o.seed) {
        cfg.seed = *o.seed;
        cfg.ic.seed = *o.seed;
    }
    return cfg;
}

void print_series_line(const pem::NormSeries& s) {
    fmt::print("{}: t = {}, {} samples, accumulator = {}, c_max = {}\n", pem::to_string(s.outcome), s.final_time,
               s.samples.size(), s.blowup.accumulator,
               s.bound.c_max ? fmt::format("{}", *s.bound.c_max) : std::string("undefined"));
}

} // namespace

int main(int argc, char** argv) {
    pem::retain_freed_memory();
    CLI::App app{"Pseudo-spectral Navier-Stokes runs with pressure-energy diagnostics"};
    app.require_subcommand(1);

    std::string config_path;
    std::string run_dir;
    double perturbation = 0.0;
    Overrides overrides;

    auto add_overrides = [&](CLI::App* cmd) {
        cmd->add_option("--output-dir", overrides.output_dir, "Override [run] output_dir");
        cmd->add_option("--seed", overrides.seed, "Override [run] seed");
    };

    auto* run_cmd = app.add_subcommand("run", "Run a scenario and write series.csv, summary.txt, checkpoints");
    run_cmd->add_option("config", config_path, "Scenario file")->required();
    add_overrides(run_cmd);

    auto* twin_cmd = app.add_subcommand("twin", "Run a reference and a perturbed copy side by side");
    twin_cmd->add_option("config", config_path, "Scenario file")->required();
    twin_cmd->add_option("--perturb", perturbation, "Relative perturbation of the initial velocity modes")
        ->required()
        ->check(CLI::NonNegativeNumber);
    add_overrides(twin_cmd);

    auto* check_cmd = app.add_subcommand("check", "Validate a scenario file and print its canonical form");
    check_cmd->add_option("config", config_path, "Scenario file")->required();

    auto* export_cmd = app.add_subcommand("export", "Write per-diagnostic CSV files from a run directory");
    export_cmd->add_option("run-dir", run_dir, "Directory containing series.csv")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : pem::exit_config_error;
    }

    try {
        if (*run_cmd) {
            const auto series = pem::run_scenario(load(config_path, overrides));
            print_series_line(series);
            if (!series.message.empty()) std::cerr << series.message << '\n';
            return pem::exit_status(series.outcome);
        }
        if (*twin_cmd) {
            const auto report = pem::run_twin_scenario(load(config_path, overrides), perturbation);
            double max_p = 0.0;
            for (const auto& s : report.samples) max_p = std::max(max_p, s.pressure_diff_E);
            fmt::print("{}: {} matched samples, max |P1 - P2|_E = {}\n", pem::to_string(report.outcome),
                       report.samples.size(), max_p);
            return pem::exit_status(report.outcome);
        }
        if (*check_cmd) {
            std::cout << pem::to_config_text(pem::load_config(config_path));
            return pem::exit_clean;
        }
        if (*export_cmd) {
            for (const auto& path : pem::export_run(run_dir)) std::cout << path.string() << '\n';
            return pem::exit_clean;
        }
    } catch (const pem::ConfigError& e) {
        for (const auto& p : e.problems()) std::cerr << "config error: " << p << '\n';
        return pem::exit_config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return pem::exit_config_error;
    }
    return pem::exit_config_error;
}
