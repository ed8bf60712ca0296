#include "pem/flow_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pem/errors.hpp"
#include "pem/spectral.hpp"
#include "pem/spectral_detail.hpp"

namespace pem {

void ThermoParams::validate() const {
    std::vector<std::string> problems;
    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) problems.push_back(std::string(name) + " must be > 0");
    };
    positive(rho, "rho");
    positive(R, "R");
    positive(c_v, "c_v");
    positive(mu, "mu");
    if (source_factor && !std::isfinite(*source_factor)) problems.push_back("source_factor must be finite");
    if (!problems.empty()) throw ConfigError(std::move(problems));
}

RealField temperature_from_pressure(const RealField& P, const ThermoParams& params, double P0) {
    params.validate();
    if (!(P0 > 0.0)) throw ConfigError("P0 must be > 0");
    if (P.components() != 1) throw ArityError("temperature_from_pressure: P must be scalar");
    const double inv = 1.0 / (params.rho * params.R);
    RealField T(P.grid(), 1);
    auto dst = T.component(0);
    const auto src = P.component(0);
    for (std::size_t p = 0; p < src.size(); ++p) {
        const double total = P0 + src[p];
        if (!(total > 0.0)) {
            throw RegimeViolationError("total pressure is not positive at grid point " + std::to_string(p));
        }
        dst[p] = total * inv;
    }
    return T;
}

RealField velocity_gradient(const RealField& u) {
    const auto& g = u.grid();
    if (u.components() != g.dim()) throw ArityError("velocity_gradient: u needs dim components");
    const auto u_hat = spectral::forward(u);
    RealField out(g, g.dim() * g.dim());
    SpectralField scalar(g, 1);
    for (int i = 0; i < g.dim(); ++i) {
        const auto src = u_hat.component(i);
        std::copy(src.begin(), src.end(), scalar.component(0).begin());
        const auto grad = spectral::detail::backward_unchecked(spectral::gradient(scalar));
        for (int j = 0; j < g.dim(); ++j) {
            std::ranges::copy(grad.component(j), out.component(i * g.dim() + j).begin());
        }
    }
    return out;
}

namespace {

// Σ_{i,j} (∂u_i/∂x_j)² pointwise.
RealField gradient_square_sum(const RealField& u) {
    const auto grad = velocity_gradient(u);
    RealField out(u.grid(), 1);
    auto dst = out.component(0);
    for (int c = 0; c < grad.components(); ++c) {
        const auto src = grad.component(c);
        for (std::size_t p = 0; p < dst.size(); ++p) dst[p] += src[p] * src[p];
    }
    return out;
}

} // namespace

RealField dissipation_phi(const RealField& u, const ThermoParams& params) {
    auto phi = gradient_square_sum(u);
    phi *= 2.0 * params.mu;
    return phi;
}

RealField dissipation_strain(const RealField& u, const ThermoParams& params) {
    const auto& g = u.grid();
    const int d = g.dim();
    const auto grad = velocity_gradient(u);
    RealField out(g, 1);
    auto dst = out.component(0);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const auto a = grad.component(i * d + j);
            const auto b = grad.component(j * d + i);
            for (std::size_t p = 0; p < dst.size(); ++p) {
                const double s = 0.5 * (a[p] + b[p]);
                dst[p] += s * s;
            }
        }
    }
    out *= 2.0 * params.mu;
    return out;
}

double gradient_energy(const RealField& u) { return integrate(gradient_square_sum(u)); }

double kinetic_energy(const RealField& u) {
    double sum = 0.0;
    for (double v : u.data()) sum += v * v;
    return 0.5 * sum * u.grid().cell_volume();
}

double max_divergence(const RealField& u) {
    const auto div = spectral::detail::backward_unchecked(spectral::divergence(spectral::forward(u)));
    return div.max_abs();
}

RealField leray_project(const RealField& v) {
    return spectral::detail::backward_unchecked(spectral::project_solenoidal(spectral::forward(v)));
}

RegimeReport regime_check(const FlowState& state, double T0) {
    if (!(T0 > 0.0)) throw ConfigError("T0 must be > 0");
    const auto& params = state.params;
    const double P0 = params.rho * params.R * T0;
    const double inv = 1.0 / (params.rho * params.R);

    RegimeReport report;
    RealField T(state.P.grid(), 1);
    auto dst = T.component(0);
    const auto src = state.P.component(0);
    for (std::size_t p = 0; p < src.size(); ++p) {
        dst[p] = (P0 + src[p]) * inv;
        report.delta_T_rel = std::max(report.delta_T_rel, std::abs(dst[p] - T0) / T0);
    }
    report.in_regime = report.delta_T_rel < regime_threshold;
    const auto T_hat = spectral::forward(T);
    report.T_h2_norm = std::sqrt(spectral::weighted_energy(T_hat, [](double k2) {
        return (1.0 + k2) * (1.0 + k2);
    }));
    return report;
}

} // namespace pem
