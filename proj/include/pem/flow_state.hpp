#pragma once

#include <optional>

#include "pem/field.hpp"

namespace pem {

// Thermodynamic constants of the constant-density ideal gas.
struct ThermoParams {
    double rho = 1.0;    // kg/m³
    double R = 287.0;    // J/(kg·K)
    double c_v = 717.5;  // J/(kg·K)
    double mu = 0.1;     // Pa·s
    // External heat source; absent means Q ≡ 0.
    std::optional<RealField> Q;
    // Overrides R/c_v in the pressure source term when set.
    std::optional<double> source_factor;

    double nu() const noexcept { return mu / rho; }
    double source_prefactor() const noexcept { return source_factor.value_or(R / c_v); }
    // Throws ConfigError listing every nonpositive constant.
    void validate() const;
};

struct FlowState {
    double t = 0.0;
    RealField u;  // dim components, m/s
    RealField P;  // zero-mean fluctuation about the reference pressure, Pa
    ThermoParams params;
};

struct RegimeReport {
    double delta_T_rel = 0.0;  // max |T − T0| / T0
    bool in_regime = true;     // delta_T_rel < 0.02
    double T_h2_norm = 0.0;
};

inline constexpr double regime_threshold = 0.02;

// T = (P0 + P)/(ρR). Throws RegimeViolationError if P0 + P ≤ 0 anywhere.
RealField temperature_from_pressure(const RealField& P, const ThermoParams& params, double P0);

// ∂_j u_i stored at component i·dim + j.
RealField velocity_gradient(const RealField& u);

// Φ = 2μ Σ_{i,j} (∂u_i/∂x_j)², spectral derivatives.
RealField dissipation_phi(const RealField& u, const ThermoParams& params);
// Standard strain-rate form 2μ Σ S_ij², for comparison only.
RealField dissipation_strain(const RealField& u, const ThermoParams& params);

// ∫ Σ_{i,j} (∂u_i/∂x_j)² dx.
double gradient_energy(const RealField& u);
// ∫ |u|²/2 dx.
double kinetic_energy(const RealField& u);
// max over the grid of |∇·u|.
double max_divergence(const RealField& u);

RealField leray_project(const RealField& v);

// T from the state's pressure and P0 = ρ R T0; out-of-regime is reported,
// never thrown.
RegimeReport regime_check(const FlowState& state, double T0);

} // namespace pem
