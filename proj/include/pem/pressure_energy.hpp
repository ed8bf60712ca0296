#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pem/flow_state.hpp"

namespace pem {

// How the material derivative ∂P/∂t + u·∇P is evaluated.
enum class DerivativeMode {
    finite_difference,  // backward difference between consecutive snapshots
    model_rhs,          // substitute the model pressure equation: prefactor·(Φ + Q)
};

std::string_view to_string(DerivativeMode mode) noexcept;

// One row of the diagnostic time series.
struct NormSample {
    double t = 0.0;
    double kinetic_energy = 0.0;
    double grad_energy = 0.0;
    double norm_E_sq = 0.0;  // dtP_term + lap_term
    double dtP_term = 0.0;   // ∫ (D_t P)² dx
    double lap_term = 0.0;   // ∫ (∇²P)² dx
    std::optional<double> ratio;  // grad_energy / norm_E_sq, unset when norm_E_sq ≤ 1e-14
    double h2_norm_P = 0.0;
    double hminus1_norm_dtP = 0.0;  // H⁻¹ norm of ∂P/∂t (partial, not material)
    RegimeReport regime;
    // Same norm for the model-equation pressure.
    double model_norm_E_sq = 0.0;
    double model_dtP_term = 0.0;
    double model_lap_term = 0.0;
    double max_div = 0.0;
    double accumulator = 0.0;  // blow-up accumulator after this sample
};

inline constexpr double degenerate_norm = 1e-14;

struct BlowupState {
    double accumulator = 0.0;
    double threshold = 0.0;
    bool tripped = false;
};

struct BoundFit {
    std::optional<double> c_fit;  // least-squares slope through the origin
    std::optional<double> c_max;  // largest pointwise ratio
    int samples_used = 0;
};

struct NormParts {
    double total = 0.0;
    double dtP_term = 0.0;
    double lap_term = 0.0;
};

// finite_difference: (P_curr − P_prev)/dt + dealias(u·∇P_curr); throws
// DataError without P_prev and ConfigError unless dt > 0.
// model_rhs: prefactor·(Φ(u) + Q); P_prev and dt are ignored.
RealField material_derivative(const RealField* P_prev, const RealField& P_curr, const RealField& u, double dt,
                              DerivativeMode mode, const ThermoParams& params);

// (∫(DtP)² + ∫(∇²P)², ∫(DtP)², ∫(∇²P)²)
NormParts norm_E_squared(const RealField& P, const RealField& DtP);

// ∫ (DtP1·DtP2 + ∇²P1·∇²P2) dx
double inner_product_E(const RealField& P1, const RealField& DtP1, const RealField& P2, const RealField& DtP2);

// sqrt((2π)^dim Σ_k (1+|k|²)^order |f̂_k|²); order ∈ {−1, 0, 1, 2}.
double sobolev_norm(const RealField& f, double order);

struct PressureSnapshot {
    RealField P;
    RealField dtP;  // ∂P/∂t
};

// ‖P‖_{L²(0,T;H²)} + ‖∂_t P‖_{L²(0,T;H⁻¹)} with trapezoidal time quadrature
// over equally spaced snapshots. Throws DataError with fewer than 2 snapshots.
double norm_B(std::span<const PressureSnapshot> series, double dt);
// Same aggregation from precomputed spatial norms at arbitrary times.
double norm_B(std::span<const double> t, std::span<const double> h2_norm, std::span<const double> hminus1_norm);

BoundFit bound_check(std::span<const NormSample> series);

BlowupState blowup_update(BlowupState state, const NormSample& sample, double dt);

// For each wavevector k: ∫ (DtP·D_tφ + ΔP·Δφ) dx with φ = cos(k·x) and
// D_tφ = u·∇φ. Throws ConfigError for k outside the dealiased band.
std::vector<double> variational_residual(const RealField& P, const RealField& DtP, const RealField& u,
                                         std::span<const std::array<int, 3>> test_modes);

} // namespace pem
