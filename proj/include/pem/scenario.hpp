#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "pem/ns_solver.hpp"
#include "pem/pressure_energy.hpp"

namespace pem {

// Default C_h: ten times the blow-up accumulator limit of the shipped
// Taylor–Green baseline (finite_difference mode), 50.66.
inline constexpr double default_blowup_threshold = 506.6;

// A complete experiment description.
struct ScenarioConfig {
    GridSpec grid{2, 64};
    InitialCondition ic{.seed = 1};  // seed mirrors `seed`
    SolverConfig solver;
    ThermoParams thermo;   // Q is materialized from heat_source at run time
    double heat_source = 0.0;  // uniform Q, W/m³
    double T0 = 300.0;     // K
    double P0 = 86100.0;   // Pa, always rho·R·T0
    DerivativeMode mode = DerivativeMode::finite_difference;
    double blowup_threshold = default_blowup_threshold;
    int output_every = 10;       // steps between recorded samples
    int checkpoint_every = 0;    // steps between checkpoints; 0 = final only
    std::filesystem::path output_dir = "runs/baseline";
    std::uint64_t seed = 1;

    // ThermoParams with Q filled in on this grid.
    ThermoParams thermo_params() const;
    // Throws ConfigError listing every invariant violation.
    void validate() const;
};

// Parse the sectioned `key = value` format. Throws ConfigError carrying one
// message per problem, each prefixed with its line number.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

// Every key with its value, in the order parse_config documents them.
// parse_config(to_config_text(c)) == c.
std::string to_config_text(const ScenarioConfig& cfg);

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

} // namespace pem
