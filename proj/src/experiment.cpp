#include "pem/experiment.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>
#include <vector>

#include "pem/errors.hpp"
#include "pem/series_io.hpp"

namespace pem {

namespace fs = std::filesystem;

ExitStatus exit_status(RunOutcome outcome) noexcept {
    switch (outcome) {
    case RunOutcome::completed: return exit_clean;
    case RunOutcome::tripped: return exit_tripped;
    case RunOutcome::diverged: return exit_diverged;
    }
    return exit_config_error;
}

RealField pack_state(const FlowState& state, const RealField& model_pressure) {
    std::vector<RealField> parts;
    for (int c = 0; c < state.u.components(); ++c) parts.push_back(extract(state.u, c));
    parts.push_back(state.P);
    parts.push_back(model_pressure);
    return stack(parts);
}

namespace {

std::ofstream open_for_write(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

void write_run_files(const fs::path& dir, const NormSeries& series) {
    fs::create_directories(dir);
    {
        auto out = open_for_write(dir / "config.cfg");
        out << to_config_text(series.scenario);
    }
    {
        auto out = open_for_write(dir / "series.csv");
        write_series_csv(out, series.samples);
    }
    {
        auto out = open_for_write(dir / "summary.txt");
        write_summary(out, series);
    }
}

} // namespace

NormSeries run_scenario(const ScenarioConfig& cfg) {
    const auto ckpt_dir = cfg.output_dir / "checkpoints";
    fs::create_directories(ckpt_dir);
    auto write = [&](const Simulation& sim) {
        const auto name = fmt::format("step_{:08d}.pem", sim.steps());
        write_checkpoint(ckpt_dir / name, pack_state(sim.state(), sim.model_pressure()), sim.state().t);
    };

    std::optional<std::size_t> last_written;
    auto observer = [&](const Simulation& sim, bool last) {
        const bool periodic =
            cfg.checkpoint_every > 0 && sim.steps() % static_cast<std::size_t>(cfg.checkpoint_every) == 0;
        if ((periodic || last) && last_written != sim.steps()) {
            write(sim);
            last_written = sim.steps();
        }
    };
    auto series = run(cfg, observer);
    write_run_files(cfg.output_dir, series);
    return series;
}

void write_twin_csv(std::ostream& out, const TwinReport& report) {
    out << "t,pressure_diff_E,velocity_diff_L2\n";
    for (const auto& s : report.samples) {
        fmt::print(out, "{},{},{}\n", s.t, s.pressure_diff_E, s.velocity_diff_L2);
    }
}

TwinReport run_twin_scenario(const ScenarioConfig& cfg, double perturbation) {
    auto report = twin_run(cfg, perturbation);
    write_run_files(cfg.output_dir / "reference", report.reference);
    write_run_files(cfg.output_dir / "perturbed", report.perturbed);
    {
        auto out = open_for_write(cfg.output_dir / "twin.csv");
        write_twin_csv(out, report);
    }
    auto out = open_for_write(cfg.output_dir / "twin_summary.txt");
    auto opt = [](const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string("undefined"); };
    double max_p = 0.0, max_u = 0.0;
    for (const auto& s : report.samples) {
        max_p = std::max(max_p, s.pressure_diff_E);
        max_u = std::max(max_u, s.velocity_diff_L2);
    }
    fmt::print(out, "outcome: {}\n", to_string(report.outcome));
    fmt::print(out, "perturbation: {}\n", report.perturbation);
    fmt::print(out, "samples: {}\n", report.samples.size());
    fmt::print(out, "max_pressure_diff_E: {}\n", max_p);
    fmt::print(out, "max_velocity_diff_L2: {}\n", max_u);
    fmt::print(out, "pressure_diff_growth_rate: {}\n", opt(report.pressure_growth_rate));
    fmt::print(out, "velocity_diff_growth_rate: {}\n", opt(report.velocity_growth_rate));
    out << "# growth rates are least-squares slopes of log(difference) against t; negative means the\n"
           "# two solutions converge in that norm over the run.\n";
    return report;
}

std::vector<fs::path> export_run(const fs::path& run_dir) {
    const auto samples = read_series_csv(run_dir / "series.csv");
    return export_plot_data(samples, run_dir / "plot");
}

} // namespace pem
