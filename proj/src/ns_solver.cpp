#include "pem/ns_solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "pem/errors.hpp"
#include "pem/spectral.hpp"
#include "pem/spectral_detail.hpp"

namespace pem {

using spectral::detail::backward_unchecked;

void SolverConfig::validate() const {
    std::vector<std::string> problems;
    if (!(dt > 0.0)) problems.push_back("dt must be > 0");
    if (!(t_end >= 0.0)) problems.push_back("t_end must be >= 0");
    if (!(nu >= 0.0)) problems.push_back("nu must be >= 0");
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) problems.push_back("cfl_safety must be in (0, 1]");
    if (!problems.empty()) throw ConfigError(std::move(problems));
}

std::string_view to_string(InitialKind kind) noexcept {
    switch (kind) {
    case InitialKind::taylor_green_2d: return "taylor_green_2d";
    case InitialKind::taylor_green_3d: return "taylor_green_3d";
    case InitialKind::random_divfree: return "random_divfree";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Initial conditions
// ---------------------------------------------------------------------------

namespace {

RealField taylor_green(const GridSpec& grid, double amplitude) {
    RealField u(grid, grid.dim());
    for (std::size_t p = 0; p < grid.points(); ++p) {
        const auto [x, y, z] = grid.coordinate(p);
        const double cz = grid.dim() == 3 ? std::cos(z) : 1.0;
        u(0, p) = amplitude * std::sin(x) * std::cos(y) * cz;
        u(1, p) = -amplitude * std::cos(x) * std::sin(y) * cz;
    }
    return u;
}

// Band-limited Gaussian modes with envelope (|k|/kp)² exp(−(|k|/kp)²),
// projected, dealiased and scaled to max|u| = amplitude.
RealField random_solenoidal(const GridSpec& grid, double amplitude, std::uint64_t seed, int peak) {
    RealField noise(grid, grid.dim());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : noise.data()) v = normal(rng);

    auto u_hat = spectral::forward(noise);
    const double kp = static_cast<double>(peak);
    for (std::size_t m = 0; m < grid.points(); ++m) {
        const auto k = grid.wavevector(m);
        const double r2 = (double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2]) / (kp * kp);
        const double envelope = r2 * std::exp(-r2);
        for (int c = 0; c < grid.dim(); ++c) u_hat(c, m) *= envelope;
    }
    u_hat = spectral::project_solenoidal(spectral::dealias(u_hat));
    auto u = backward_unchecked(u_hat);
    const double peak_speed = u.max_abs();
    if (peak_speed > 0.0) u *= amplitude / peak_speed;
    return u;
}

} // namespace

FlowState make_initial(const InitialCondition& ic, const GridSpec& grid, const ThermoParams& params) {
    params.validate();
    RealField u(grid, grid.dim());
    switch (ic.kind) {
    case InitialKind::taylor_green_2d:
        if (grid.dim() != 2) throw ConfigError("taylor_green_2d requires dim = 2");
        u = taylor_green(grid, ic.amplitude);
        break;
    case InitialKind::taylor_green_3d:
        if (grid.dim() != 3) throw ConfigError("taylor_green_3d requires dim = 3");
        u = taylor_green(grid, ic.amplitude);
        break;
    case InitialKind::random_divfree:
        if (ic.spectrum_peak < 1) throw ConfigError("spectrum_peak must be >= 1");
        u = random_solenoidal(grid, ic.amplitude, ic.seed, ic.spectrum_peak);
        break;
    }
    auto P = pressure_poisson(u, params);
    return FlowState{0.0, std::move(u), std::move(P), params};
}

RealField perturb_velocity(const RealField& u, double eps, std::uint64_t seed) {
    const auto& g = u.grid();
    auto u_hat = spectral::forward(u);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    std::vector<double> factor(g.points(), 0.0);
    std::vector<bool> done(g.points(), false);
    // Visit modes in storage order; the partner −k reuses the same factor.
    for (std::size_t m = 0; m < g.points(); ++m) {
        if (done[m]) continue;
        auto k = g.wavevector(m);
        for (auto& kj : k) kj = -kj;
        const auto partner = g.mode_index(k);
        factor[m] = factor[partner] = 1.0 + eps * uniform(rng);
        done[m] = done[partner] = true;
    }
    for (int c = 0; c < u.components(); ++c) {
        auto block = u_hat.component(c);
        for (std::size_t m = 0; m < g.points(); ++m) block[m] *= factor[m];
    }
    return backward_unchecked(u_hat);
}

// ---------------------------------------------------------------------------
// Pressure and time stepping
// ---------------------------------------------------------------------------

RealField pressure_poisson(const RealField& u, const ThermoParams& params) {
    const auto u_hat = spectral::forward(u);
    const auto convective = spectral::advect(u, u_hat);
    auto rhs = spectral::divergence(convective);
    rhs *= -params.rho;
    return backward_unchecked(spectral::poisson_solve(rhs));
}

double stable_dt(const FlowState& state, const SolverConfig& cfg) {
    const auto& g = state.u.grid();
    double speed = 0.0;
    for (std::size_t p = 0; p < g.points(); ++p) {
        double s2 = 0.0;
        for (int c = 0; c < state.u.components(); ++c) s2 += state.u(c, p) * state.u(c, p);
        speed = std::max(speed, s2);
    }
    speed = std::sqrt(speed);
    if (speed == 0.0) return cfg.dt;
    return std::min(cfg.dt, cfg.cfl_safety * g.spacing() / speed);
}

namespace {

SpectralField momentum_rhs(const SpectralField& u_hat, double nu) {
    const auto u = backward_unchecked(u_hat);
    auto rhs = spectral::laplacian(u_hat);
    rhs *= nu;
    rhs -= spectral::advect(u, u_hat);
    return spectral::project_solenoidal(rhs);
}

// y + a·k
SpectralField axpy(const SpectralField& y, double a, const SpectralField& k) {
    SpectralField out = k;
    out *= a;
    out += y;
    return out;
}

template <typename Rhs>
SpectralField rk4(const SpectralField& y, double dt, Rhs&& rhs) {
    const auto k1 = rhs(y, 0.0);
    const auto k2 = rhs(axpy(y, 0.5 * dt, k1), 0.5);
    const auto k3 = rhs(axpy(y, 0.5 * dt, k2), 0.5);
    const auto k4 = rhs(axpy(y, dt, k3), 1.0);
    SpectralField out = y;
    auto dst = out.coeffs();
    const auto a = k1.coeffs(), b = k2.coeffs(), c = k3.coeffs(), d = k4.coeffs();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += dt / 6.0 * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]);
    return out;
}

} // namespace

FlowState step(const FlowState& state, const SolverConfig& cfg, double dt) {
    if (!(dt > 0.0)) throw ConfigError("step: dt must be > 0");
    const auto u_hat = spectral::forward(state.u);
    const auto blowup = [&] {
        return BlowupError("velocity became non-finite after t = " + std::to_string(state.t), state.t);
    };
    // An overflowing intermediate stage surfaces as CorruptionError.
    const auto next_hat = [&] {
        try {
            return rk4(u_hat, dt, [&](const SpectralField& y, double) { return momentum_rhs(y, cfg.nu); });
        } catch (const CorruptionError&) {
            throw blowup();
        }
    }();
    auto u = backward_unchecked(next_hat);
    if (!u.all_finite()) throw blowup();
    auto P = pressure_poisson(u, state.params);
    return FlowState{state.t + dt, std::move(u), std::move(P), state.params};
}

FlowState step(const FlowState& state, const SolverConfig& cfg) { return step(state, cfg, stable_dt(state, cfg)); }

RealField pressure_source(const RealField& u, const ThermoParams& params) {
    auto source = dissipation_phi(u, params);
    if (params.Q) source += *params.Q;
    source *= params.source_prefactor();
    return source;
}

namespace {

RealField evolve_model(const RealField& u0, const RealField& u1, const ThermoParams& params,
                       const RealField& P_model, double dt, double t) {
    if (!(dt > 0.0)) throw ConfigError("evolve_pressure_model: dt must be > 0");
    require_same_grid(u0.grid(), P_model.grid(), "evolve_pressure_model");
    if (P_model.components() != 1) throw ArityError("evolve_pressure_model: P_model must be scalar");

    // Velocity and source at the three RK4 abscissae s ∈ {0, 1/2, 1}.
    const bool frozen = &u0 == &u1;
    const RealField u_half = frozen ? u0 : 0.5 * (u0 + u1);
    const RealField* velocity[3] = {&u0, &u_half, &u1};
    const auto s0 = spectral::forward(pressure_source(u0, params));
    const SpectralField source[3] = {
        s0,
        frozen ? s0 : spectral::forward(pressure_source(u_half, params)),
        frozen ? s0 : spectral::forward(pressure_source(u1, params)),
    };
    auto pick = [](double s) { return s == 0.0 ? 0 : (s == 0.5 ? 1 : 2); };

    const auto blowup = [&] { return BlowupError("model pressure became non-finite after t = " + std::to_string(t), t); };
    const auto next = [&] {
        try {
            return rk4(spectral::forward(P_model), dt, [&](const SpectralField& y, double s) {
                const int i = pick(s);
                return source[i] - spectral::advect(*velocity[i], y);
            });
        } catch (const CorruptionError&) {
            throw blowup();
        }
    }();
    auto P = backward_unchecked(next);
    if (!P.all_finite()) throw blowup();
    return P;
}

} // namespace

RealField evolve_pressure_model(const FlowState& state, const RealField& P_model, double dt) {
    return evolve_model(state.u, state.u, state.params, P_model, dt, state.t);
}

RealField evolve_pressure_model(const FlowState& state, const RealField& P_model, const SolverConfig& cfg) {
    return evolve_pressure_model(state, P_model, stable_dt(state, cfg));
}

RealField evolve_pressure_model(const FlowState& start, const FlowState& end, const RealField& P_model,
                                double dt) {
    return evolve_model(start.u, end.u, start.params, P_model, dt, start.t);
}

} // namespace pem
