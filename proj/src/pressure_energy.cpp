#include "pem/pressure_energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pem/errors.hpp"
#include "pem/ns_solver.hpp"
#include "pem/spectral.hpp"
#include "pem/spectral_detail.hpp"

namespace pem {

using spectral::detail::backward_unchecked;

std::string_view to_string(DerivativeMode mode) noexcept {
    switch (mode) {
    case DerivativeMode::finite_difference: return "finite_difference";
    case DerivativeMode::model_rhs: return "model_rhs";
    }
    return "unknown";
}

namespace {

void require_scalar_pair(const RealField& a, const RealField& b, const char* what) {
    require_same_grid(a.grid(), b.grid(), what);
    if (a.components() != 1 || b.components() != 1) {
        throw ArityError(std::string(what) + ": scalar fields expected");
    }
}

RealField laplacian_of(const RealField& f) {
    return backward_unchecked(spectral::laplacian(spectral::forward(f)));
}

double dot(const RealField& a, const RealField& b) {
    const auto x = a.component(0);
    const auto y = b.component(0);
    double sum = 0.0;
    for (std::size_t p = 0; p < x.size(); ++p) sum += x[p] * y[p];
    return sum * a.grid().cell_volume();
}

} // namespace

RealField material_derivative(const RealField* P_prev, const RealField& P_curr, const RealField& u, double dt,
                              DerivativeMode mode, const ThermoParams& params) {
    require_same_grid(P_curr.grid(), u.grid(), "material_derivative");
    if (mode == DerivativeMode::model_rhs) return pressure_source(u, params);

    if (P_prev == nullptr) throw DataError("material_derivative: finite_difference needs a previous snapshot");
    if (!(dt > 0.0)) throw ConfigError("material_derivative: dt must be > 0");
    require_scalar_pair(*P_prev, P_curr, "material_derivative");

    auto out = backward_unchecked(spectral::advect(u, spectral::forward(P_curr)));
    const auto curr = P_curr.component(0);
    const auto prev = P_prev->component(0);
    auto dst = out.component(0);
    for (std::size_t p = 0; p < dst.size(); ++p) dst[p] += (curr[p] - prev[p]) / dt;
    return out;
}

NormParts norm_E_squared(const RealField& P, const RealField& DtP) {
    require_scalar_pair(P, DtP, "norm_E_squared");
    const auto lap = laplacian_of(P);
    NormParts parts;
    parts.dtP_term = dot(DtP, DtP);
    parts.lap_term = dot(lap, lap);
    parts.total = parts.dtP_term + parts.lap_term;
    return parts;
}

double inner_product_E(const RealField& P1, const RealField& DtP1, const RealField& P2, const RealField& DtP2) {
    require_scalar_pair(P1, DtP1, "inner_product_E");
    require_scalar_pair(P2, DtP2, "inner_product_E");
    require_scalar_pair(P1, P2, "inner_product_E");
    return dot(DtP1, DtP2) + dot(laplacian_of(P1), laplacian_of(P2));
}

double sobolev_norm(const RealField& f, double order) {
    if (order != -1.0 && order != 0.0 && order != 1.0 && order != 2.0) {
        throw ConfigError("sobolev_norm: order must be one of -1, 0, 1, 2");
    }
    if (f.components() != 1) throw ArityError("sobolev_norm: scalar field expected");
    const auto f_hat = spectral::forward(f);
    return std::sqrt(spectral::weighted_energy(f_hat, [order](double k2) { return std::pow(1.0 + k2, order); }));
}

double norm_B(std::span<const double> t, std::span<const double> h2_norm, std::span<const double> hminus1_norm) {
    if (t.size() < 2) throw DataError("norm_B: at least two samples are required");
    if (h2_norm.size() != t.size() || hminus1_norm.size() != t.size()) {
        throw DataError("norm_B: series lengths differ");
    }
    double a = 0.0;
    double b = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double w = 0.5 * (t[i] - t[i - 1]);
        a += w * (h2_norm[i - 1] * h2_norm[i - 1] + h2_norm[i] * h2_norm[i]);
        b += w * (hminus1_norm[i - 1] * hminus1_norm[i - 1] + hminus1_norm[i] * hminus1_norm[i]);
    }
    return std::sqrt(a) + std::sqrt(b);
}

double norm_B(std::span<const PressureSnapshot> series, double dt) {
    if (series.size() < 2) throw DataError("norm_B: at least two snapshots are required");
    if (!(dt > 0.0)) throw ConfigError("norm_B: dt must be > 0");
    std::vector<double> t, h2, hm1;
    for (std::size_t i = 0; i < series.size(); ++i) {
        t.push_back(static_cast<double>(i) * dt);
        h2.push_back(sobolev_norm(series[i].P, 2));
        hm1.push_back(sobolev_norm(series[i].dtP, -1));
    }
    return norm_B(t, h2, hm1);
}

BoundFit bound_check(std::span<const NormSample> series) {
    if (series.empty()) throw DataError("bound_check: empty series");
    BoundFit fit;
    double xy = 0.0;
    double xx = 0.0;
    double best = 0.0;
    for (const auto& s : series) {
        if (!(s.norm_E_sq > degenerate_norm)) continue;
        xy += s.norm_E_sq * s.grad_energy;
        xx += s.norm_E_sq * s.norm_E_sq;
        const double r = s.grad_energy / s.norm_E_sq;
        best = fit.samples_used == 0 ? r : std::max(best, r);
        ++fit.samples_used;
    }
    if (fit.samples_used > 0) {
        fit.c_fit = xy / xx;
        fit.c_max = best;
    }
    return fit;
}

BlowupState blowup_update(BlowupState state, const NormSample& sample, double dt) {
    if (!(dt > 0.0)) throw ConfigError("blowup_update: dt must be > 0");
    state.accumulator += std::max(sample.norm_E_sq, 0.0) * dt;
    if (state.accumulator > state.threshold) state.tripped = true;
    return state;
}

std::vector<double> variational_residual(const RealField& P, const RealField& DtP, const RealField& u,
                                         std::span<const std::array<int, 3>> test_modes) {
    require_scalar_pair(P, DtP, "variational_residual");
    const auto& g = P.grid();
    require_same_grid(g, u.grid(), "variational_residual");
    if (u.components() != g.dim()) throw ArityError("variational_residual: u needs dim components");
    for (const auto& k : test_modes) {
        if (!spectral::in_dealiased_band(g, k) || (g.dim() == 2 && k[2] != 0)) {
            throw ConfigError("variational_residual: test mode (" + std::to_string(k[0]) + ", " +
                              std::to_string(k[1]) + ", " + std::to_string(k[2]) + ") is outside the resolved band");
        }
    }

    const auto lap = laplacian_of(P);
    const auto dtp = DtP.component(0);
    const auto lp = lap.component(0);
    std::vector<double> residuals;
    residuals.reserve(test_modes.size());
    for (const auto& k : test_modes) {
        const double k2 = double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
        double sum = 0.0;
        for (std::size_t p = 0; p < g.points(); ++p) {
            const auto x = g.coordinate(p);
            const double phase = k[0] * x[0] + k[1] * x[1] + k[2] * x[2];
            double u_dot_k = 0.0;
            for (int j = 0; j < g.dim(); ++j) u_dot_k += u(j, p) * k[j];
            const double dt_phi = -std::sin(phase) * u_dot_k;
            const double lap_phi = -k2 * std::cos(phase);
            sum += dtp[p] * dt_phi + lp[p] * lap_phi;
        }
        residuals.push_back(sum * g.cell_volume());
    }
    return residuals;
}

} // namespace pem
