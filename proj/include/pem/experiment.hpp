#pragma once

#include <filesystem>
#include <iosfwd>

#include "pem/checkpoint.hpp"
#include "pem/simulation.hpp"

namespace pem {

// Process exit codes of the command-line tool.
enum ExitStatus : int {
    exit_clean = 0,
    exit_config_error = 1,
    exit_tripped = 2,
    exit_diverged = 3,
};

ExitStatus exit_status(RunOutcome outcome) noexcept;

// u components, then P, then the model pressure, as one field.
RealField pack_state(const FlowState& state, const RealField& model_pressure);

// Runs the scenario and writes into cfg.output_dir:
//   config.cfg       canonical form of cfg
//   series.csv       one row per recorded sample
//   summary.txt      bound fit, accumulator, regime flags
//   checkpoints/     step_<NNNNNNNN>.pem every checkpoint_every steps and at the end
// Files are written even when the run diverges.
NormSeries run_scenario(const ScenarioConfig& cfg);

// Twin run; writes reference/ and perturbed/ run directories plus twin.csv
// and twin_summary.txt under cfg.output_dir.
TwinReport run_twin_scenario(const ScenarioConfig& cfg, double perturbation);

void write_twin_csv(std::ostream& out, const TwinReport& report);

// Re-reads <run_dir>/series.csv and writes tidy files into <run_dir>/plot.
std::vector<std::filesystem::path> export_run(const std::filesystem::path& run_dir);

} // namespace pem
