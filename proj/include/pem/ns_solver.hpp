#pragma once

#include <cstdint>
#include <string_view>

#include "pem/flow_state.hpp"

namespace pem {

enum class Scheme { rk4 };

struct SolverConfig {
    double dt = 1e-3;          // ceiling on the step, s
    double t_end = 1.0;        // s
    double nu = 0.1;           // m²/s
    Scheme scheme = Scheme::rk4;
    double cfl_safety = 0.5;   // in (0, 1]

    void validate() const;
};

enum class InitialKind { taylor_green_2d, taylor_green_3d, random_divfree };

std::string_view to_string(InitialKind kind) noexcept;

struct InitialCondition {
    InitialKind kind = InitialKind::taylor_green_2d;
    double amplitude = 1.0;
    std::uint64_t seed = 0;
    int spectrum_peak = 4;
};

// Divergence-free u and the matching Navier–Stokes pressure at t = 0.
// Throws ConfigError when the kind does not fit grid.dim().
FlowState make_initial(const InitialCondition& ic, const GridSpec& grid, const ThermoParams& params);

// Zero-mean P with ∇²P = −ρ ∇·dealias(u·∇u).
RealField pressure_poisson(const RealField& u, const ThermoParams& params);

// min(cfg.dt, cfl_safety·h/max|u|).
double stable_dt(const FlowState& state, const SolverConfig& cfg);

// One RK4 step of du/dt = Π[−dealias(u·∇u) + ν∇²u], Π the Leray projector,
// followed by a fresh pressure solve. Throws BlowupError on NaN/Inf.
FlowState step(const FlowState& state, const SolverConfig& cfg, double dt);
FlowState step(const FlowState& state, const SolverConfig& cfg);

// Source term of the model pressure equation: prefactor·(Φ(u) + Q).
RealField pressure_source(const RealField& u, const ThermoParams& params);

// One RK4 step of ∂P/∂t = −dealias(u·∇P) + prefactor·(Φ + Q) with the
// velocity of `state` held fixed over the step.
RealField evolve_pressure_model(const FlowState& state, const RealField& P_model, const SolverConfig& cfg);
RealField evolve_pressure_model(const FlowState& state, const RealField& P_model, double dt);
// Same, with u interpolated linearly between the two ends of the step.
RealField evolve_pressure_model(const FlowState& start, const FlowState& end, const RealField& P_model,
                                double dt);

// Multiply every velocity mode pair (k, −k) by 1 + eps·r_k, r_k uniform in
// [−1, 1] drawn from `seed`. Keeps u real and divergence-free.
RealField perturb_velocity(const RealField& u, double eps, std::uint64_t seed);

} // namespace pem
