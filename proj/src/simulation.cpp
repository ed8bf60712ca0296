#include "pem/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "pem/errors.hpp"
#include "pem/spectral.hpp"
#include "pem/spectral_detail.hpp"

namespace pem {

using spectral::detail::backward_unchecked;

std::string_view to_string(RunOutcome outcome) noexcept {
    switch (outcome) {
    case RunOutcome::completed: return "completed";
    case RunOutcome::tripped: return "tripped";
    case RunOutcome::diverged: return "diverged";
    }
    return "unknown";
}

namespace {

FlowState initial_state(const ScenarioConfig& cfg, double perturbation) {
    cfg.validate();
    auto ic = cfg.ic;
    ic.seed = cfg.seed;
    auto state = make_initial(ic, cfg.grid, cfg.thermo_params());
    if (perturbation != 0.0) {
        state.u = perturb_velocity(state.u, perturbation, cfg.seed);
        state.P = pressure_poisson(state.u, state.params);
    }
    return state;
}

RealField advection_of(const RealField& u, const RealField& P) {
    return backward_unchecked(spectral::advect(u, spectral::forward(P)));
}

// (later − earlier)/dt
RealField difference_quotient(const RealField& later, const RealField& earlier, double dt) {
    auto out = later - earlier;
    out *= 1.0 / dt;
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

Simulation::Simulation(const ScenarioConfig& cfg, double perturbation)
    : cfg_(cfg), state_(initial_state(cfg, perturbation)), model_(state_.P) {}

bool Simulation::finished() const noexcept {
    const double t_end = cfg_.solver.t_end;
    return state_.t >= t_end - 1e-12 * std::max(1.0, t_end);
}

double Simulation::next_dt() const {
    return std::min(stable_dt(state_, cfg_.solver), cfg_.solver.t_end - state_.t);
}

void Simulation::advance(double dt) {
    FlowState next = state_;
    RealField next_model = model_;
    if (lookahead_ && lookahead_->dt == dt) {
        next = std::move(lookahead_->state);
        next_model = std::move(lookahead_->model);
    } else {
        next = step(state_, cfg_.solver, dt);
        next_model = evolve_pressure_model(state_, next, model_, dt);
    }
    lookahead_.reset();
    prev_P_ = std::move(state_.P);
    prev_model_ = std::move(model_);
    state_ = std::move(next);
    model_ = std::move(next_model);
    last_dt_ = dt;
    ++steps_;
}

PressureDerivatives Simulation::derivatives() {
    const auto& u = state_.u;
    const auto& params = state_.params;

    if (cfg_.mode == DerivativeMode::model_rhs) {
        auto source = material_derivative(nullptr, state_.P, u, 0.0, DerivativeMode::model_rhs, params);
        auto dtP = source - advection_of(u, state_.P);
        return {source, std::move(dtP), source};
    }

    if (prev_P_) {
        auto DtP = material_derivative(&*prev_P_, state_.P, u, last_dt_, cfg_.mode, params);
        auto dtP = difference_quotient(state_.P, *prev_P_, last_dt_);
        auto DtP_model = material_derivative(&*prev_model_, model_, u, last_dt_, cfg_.mode, params);
        return {std::move(DtP), std::move(dtP), std::move(DtP_model)};
    }

    // No history yet: forward difference over one provisional step.
    double dt = next_dt();
    if (!(dt > 0.0)) dt = stable_dt(state_, cfg_.solver);
    if (!lookahead_ || lookahead_->dt != dt) {
        auto next = step(state_, cfg_.solver, dt);
        auto next_model = evolve_pressure_model(state_, next, model_, dt);
        lookahead_ = Lookahead{dt, std::move(next), std::move(next_model)};
    }
    auto dtP = difference_quotient(lookahead_->state.P, state_.P, dt);
    auto DtP = dtP + advection_of(u, state_.P);
    auto DtP_model = difference_quotient(lookahead_->model, model_, dt) + advection_of(u, model_);
    return {std::move(DtP), std::move(dtP), std::move(DtP_model)};
}

NormSample Simulation::measure(const PressureDerivatives& d) const {
    NormSample s;
    s.t = state_.t;
    s.kinetic_energy = kinetic_energy(state_.u);
    s.grad_energy = gradient_energy(state_.u);
    const auto parts = norm_E_squared(state_.P, d.DtP);
    s.norm_E_sq = parts.total;
    s.dtP_term = parts.dtP_term;
    s.lap_term = parts.lap_term;
    if (s.norm_E_sq > degenerate_norm) s.ratio = s.grad_energy / s.norm_E_sq;
    s.h2_norm_P = sobolev_norm(state_.P, 2);
    s.hminus1_norm_dtP = sobolev_norm(d.dtP, -1);
    s.regime = regime_check(state_, cfg_.T0);
    const auto model = norm_E_squared(model_, d.DtP_model);
    s.model_norm_E_sq = model.total;
    s.model_dtP_term = model.dtP_term;
    s.model_lap_term = model.lap_term;
    s.max_div = max_divergence(state_.u);
    return s;
}

// ---------------------------------------------------------------------------
// Recording
// ---------------------------------------------------------------------------

SeriesRecorder::SeriesRecorder(const ScenarioConfig& cfg) {
    series_.scenario = cfg;
    series_.blowup.threshold = cfg.blowup_threshold;
}

void SeriesRecorder::record(NormSample sample) {
    if (!series_.samples.empty()) {
        const double dt = sample.t - series_.samples.back().t;
        series_.blowup = blowup_update(series_.blowup, sample, dt);
    }
    sample.accumulator = series_.blowup.accumulator;
    series_.samples.push_back(sample);
}

NormSeries SeriesRecorder::finish(RunOutcome outcome, double final_time, std::string message) {
    NormSeries out = series_;
    if (outcome == RunOutcome::completed && out.blowup.tripped) outcome = RunOutcome::tripped;
    out.outcome = outcome;
    out.final_time = final_time;
    out.message = std::move(message);
    out.bound = bound_check(out.samples);
    if (out.samples.size() >= 2) {
        std::vector<double> t, h2, hm1;
        for (const auto& s : out.samples) {
            t.push_back(s.t);
            h2.push_back(s.h2_norm_P);
            hm1.push_back(s.hminus1_norm_dtP);
        }
        out.norm_B = norm_B(t, h2, hm1);
    }
    return out;
}

NormSeries run(const ScenarioConfig& cfg, const StepObserver& observer) {
    Simulation sim(cfg);
    SeriesRecorder recorder(cfg);
    recorder.record(sim.measure());

    while (!sim.finished()) {
        if (observer) observer(sim, false);
        try {
            sim.advance(sim.next_dt());
        } catch (const BlowupError& e) {
            if (observer) observer(sim, true);
            return recorder.finish(RunOutcome::diverged, e.time(), e.what());
        }
        if (sim.steps() % static_cast<std::size_t>(cfg.output_every) == 0 || sim.finished()) {
            recorder.record(sim.measure());
        }
    }
    if (observer) observer(sim, true);
    return recorder.finish(RunOutcome::completed, sim.state().t);
}

std::optional<double> accumulator_limit(std::span<const NormSample> samples) {
    if (samples.empty()) return std::nullopt;
    const auto& last = samples.back();
    if (last.norm_E_sq == 0.0) return last.accumulator;
    if (samples.size() < 2) return std::nullopt;
    const auto& prev = samples[samples.size() - 2];
    if (!(prev.norm_E_sq > 0.0) || !(last.t > prev.t)) return std::nullopt;
    // Continue the last ratio q geometrically at the last spacing: the
    // remaining right-endpoint sum is N·Δt·q/(1 − q).
    const double q = last.norm_E_sq / prev.norm_E_sq;
    if (!(q < 1.0)) return std::nullopt;
    return last.accumulator + last.norm_E_sq * (last.t - prev.t) * q / (1.0 - q);
}

// ---------------------------------------------------------------------------
// Twin runs
// ---------------------------------------------------------------------------

namespace {

double l2_difference(const RealField& a, const RealField& b) {
    double sum = 0.0;
    const auto x = a.data();
    const auto y = b.data();
    for (std::size_t i = 0; i < x.size(); ++i) sum += (x[i] - y[i]) * (x[i] - y[i]);
    return std::sqrt(sum * a.grid().cell_volume());
}

std::optional<double> log_slope(const std::vector<TwinSample>& samples, double TwinSample::*field) {
    double st = 0, sy = 0, stt = 0, sty = 0;
    int count = 0;
    for (const auto& s : samples) {
        const double v = s.*field;
        if (!(v > 0.0)) continue;
        const double y = std::log(v);
        st += s.t;
        sy += y;
        stt += s.t * s.t;
        sty += s.t * y;
        ++count;
    }
    const double denom = count * stt - st * st;
    if (count < 2 || denom <= 0.0) return std::nullopt;
    return (count * sty - st * sy) / denom;
}

} // namespace

TwinReport twin_run(const ScenarioConfig& cfg, double perturbation) {
    if (!(perturbation >= 0.0)) throw ConfigError("perturbation must be >= 0");
    Simulation a(cfg);
    Simulation b(cfg, perturbation);
    SeriesRecorder rec_a(cfg);
    SeriesRecorder rec_b(cfg);
    TwinReport report;
    report.perturbation = perturbation;

    auto sample_pair = [&] {
        const auto da = a.derivatives();
        const auto db = b.derivatives();
        rec_a.record(a.measure(da));
        rec_b.record(b.measure(db));
        const auto diff = norm_E_squared(a.state().P - b.state().P, da.DtP - db.DtP);
        report.samples.push_back(
            {a.state().t, std::sqrt(diff.total), l2_difference(a.state().u, b.state().u)});
    };

    sample_pair();
    std::string message;
    RunOutcome outcome = RunOutcome::completed;
    double final_time = 0.0;
    while (!a.finished()) {
        const double dt = std::min(a.next_dt(), b.next_dt());
        try {
            a.advance(dt);
            b.advance(dt);
        } catch (const BlowupError& e) {
            outcome = RunOutcome::diverged;
            message = e.what();
            final_time = e.time();
            break;
        }
        if (a.steps() % static_cast<std::size_t>(cfg.output_every) == 0 || a.finished()) sample_pair();
    }
    if (outcome == RunOutcome::completed) final_time = a.state().t;

    report.reference = rec_a.finish(outcome, final_time, message);
    report.perturbed = rec_b.finish(outcome, final_time, message);
    report.outcome = outcome;
    if (outcome == RunOutcome::completed &&
        (report.reference.outcome == RunOutcome::tripped || report.perturbed.outcome == RunOutcome::tripped)) {
        report.outcome = RunOutcome::tripped;
    }
    report.pressure_growth_rate = log_slope(report.samples, &TwinSample::pressure_diff_E);
    report.velocity_growth_rate = log_slope(report.samples, &TwinSample::velocity_diff_L2);
    return report;
}

} // namespace pem
