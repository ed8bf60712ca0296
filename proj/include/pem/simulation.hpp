#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pem/scenario.hpp"

namespace pem {

enum class RunOutcome { completed, tripped, diverged };

std::string_view to_string(RunOutcome outcome) noexcept;

// Per-run record of every diagnostic.
struct NormSeries {
    std::vector<NormSample> samples;
    ScenarioConfig scenario;
    BlowupState blowup;
    BoundFit bound;
    std::optional<double> norm_B;
    RunOutcome outcome = RunOutcome::completed;
    double final_time = 0.0;  // last time with a finite state
    std::string message;
};

// Material derivatives of both pressures at the current time.
struct PressureDerivatives {
    RealField DtP;        // material derivative of the Navier–Stokes pressure
    RealField dtP;        // its partial time derivative
    RealField DtP_model;  // material derivative of the model pressure
};

// Owns the evolving state of one scenario: velocity, Navier–Stokes pressure
// and the independently evolved model pressure.
class Simulation {
public:
    // perturbation > 0 perturbs the initial velocity modes (twin runs).
    explicit Simulation(const ScenarioConfig& cfg, double perturbation = 0.0);

    const ScenarioConfig& config() const noexcept { return cfg_; }
    const FlowState& state() const noexcept { return state_; }
    const RealField& model_pressure() const noexcept { return model_; }
    std::size_t steps() const noexcept { return steps_; }

    bool finished() const noexcept;
    // CFL-capped step, clipped so the run lands on t_end.
    double next_dt() const;
    // Throws BlowupError, leaving the state at its last finite value.
    void advance(double dt);

    // finite_difference mode uses a forward difference before the first step.
    PressureDerivatives derivatives();
    NormSample measure(const PressureDerivatives& d) const;
    NormSample measure() { return measure(derivatives()); }

private:
    struct Lookahead {
        double dt;
        FlowState state;
        RealField model;
    };

    ScenarioConfig cfg_;
    FlowState state_;
    RealField model_;
    std::optional<RealField> prev_P_;
    std::optional<RealField> prev_model_;
    double last_dt_ = 0.0;
    std::size_t steps_ = 0;
    std::optional<Lookahead> lookahead_;
};

// Builds a NormSeries sample by sample, feeding the blow-up accumulator with
// Δt_k = t_k − t_{k−1}.
class SeriesRecorder {
public:
    explicit SeriesRecorder(const ScenarioConfig& cfg);
    void record(NormSample sample);
    const NormSeries& series() const noexcept { return series_; }
    NormSeries finish(RunOutcome outcome, double final_time, std::string message = {});

private:
    NormSeries series_;
};

// Called at step 0 and after every step; `last` is set exactly once, on the
// final call, which also follows a divergence (with the last finite state).
using StepObserver = std::function<void(const Simulation&, bool last)>;

// Integrates to t_end or until the state diverges; a divergence ends the run
// with outcome `diverged` and keeps the samples recorded so far.
NormSeries run(const ScenarioConfig& cfg, const StepObserver& observer = {});

// Accumulator plus the geometric tail implied by the last two samples;
// unset when the norm is not decaying.
std::optional<double> accumulator_limit(std::span<const NormSample> samples);

struct TwinSample {
    double t = 0.0;
    double pressure_diff_E = 0.0;  // ‖P₁ − P₂‖_E
    double velocity_diff_L2 = 0.0; // ‖u₁ − u₂‖_{L²}
};

struct TwinReport {
    std::vector<TwinSample> samples;
    NormSeries reference;
    NormSeries perturbed;
    double perturbation = 0.0;
    // Least-squares slope of log difference against t, over nonzero samples.
    std::optional<double> pressure_growth_rate;
    std::optional<double> velocity_growth_rate;
    RunOutcome outcome = RunOutcome::completed;
};

// Two runs in lockstep from initial data differing by `perturbation`.
TwinReport twin_run(const ScenarioConfig& cfg, double perturbation);

} // namespace pem
