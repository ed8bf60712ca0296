#include "pem/series_io.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "pem/errors.hpp"

namespace pem {

namespace {

#define PEM_PLAIN_COLUMN(field, text)                                                                   \
    SeriesColumn {                                                                                      \
        #field, text, [](const NormSample& s) -> std::optional<double> { return s.field; },             \
            [](NormSample& s, std::optional<double> v) { s.field = v.value_or(0.0); }                   \
    }

const SeriesColumn columns[] = {
    PEM_PLAIN_COLUMN(t, "time"),
    PEM_PLAIN_COLUMN(kinetic_energy, "kinetic energy, integral of |u|^2/2"),
    PEM_PLAIN_COLUMN(grad_energy, "integral of sum_ij (du_i/dx_j)^2"),
    PEM_PLAIN_COLUMN(norm_E_sq, "pressure-energy norm squared, dtP_term + lap_term"),
    PEM_PLAIN_COLUMN(dtP_term, "integral of (material derivative of P)^2"),
    PEM_PLAIN_COLUMN(lap_term, "integral of (laplacian of P)^2"),
    SeriesColumn{"ratio", "grad_energy / norm_E_sq; empty when norm_E_sq <= 1e-14",
                 [](const NormSample& s) { return s.ratio; },
                 [](NormSample& s, std::optional<double> v) { s.ratio = v; }},
    PEM_PLAIN_COLUMN(h2_norm_P, "H^2 norm of P"),
    PEM_PLAIN_COLUMN(hminus1_norm_dtP, "H^-1 norm of the partial time derivative of P"),
    SeriesColumn{"delta_T_rel", "max |T - T0| / T0",
                 [](const NormSample& s) -> std::optional<double> { return s.regime.delta_T_rel; },
                 [](NormSample& s, std::optional<double> v) { s.regime.delta_T_rel = v.value_or(0.0); }},
    SeriesColumn{"in_regime", "1 when delta_T_rel < 0.02, else 0",
                 [](const NormSample& s) -> std::optional<double> { return s.regime.in_regime ? 1.0 : 0.0; },
                 [](NormSample& s, std::optional<double> v) { s.regime.in_regime = v.value_or(0.0) != 0.0; }},
    SeriesColumn{"T_h2_norm", "H^2 norm of the temperature",
                 [](const NormSample& s) -> std::optional<double> { return s.regime.T_h2_norm; },
                 [](NormSample& s, std::optional<double> v) { s.regime.T_h2_norm = v.value_or(0.0); }},
    PEM_PLAIN_COLUMN(model_norm_E_sq, "pressure-energy norm squared of the model pressure"),
    PEM_PLAIN_COLUMN(model_dtP_term, "dtP_term of the model pressure"),
    PEM_PLAIN_COLUMN(model_lap_term, "lap_term of the model pressure"),
    PEM_PLAIN_COLUMN(max_div, "max |div u|"),
    PEM_PLAIN_COLUMN(accumulator, "blow-up accumulator, sum of norm_E_sq * dt_k"),
};

#undef PEM_PLAIN_COLUMN

std::string format_cell(std::optional<double> v) { return v ? fmt::format("{}", *v) : std::string(); }

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

} // namespace

std::span<const SeriesColumn> series_columns() { return columns; }

void write_series_csv(std::ostream& out, std::span<const NormSample> samples) {
    std::string line;
    for (const auto& c : columns) {
        if (!line.empty()) line += ',';
        line += c.name;
    }
    out << line << '\n';
    for (const auto& s : samples) {
        line.clear();
        for (std::size_t i = 0; i < std::size(columns); ++i) {
            if (i) line += ',';
            line += format_cell(columns[i].get(s));
        }
        out << line << '\n';
    }
}

std::vector<NormSample> read_series_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("series.csv: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_row(line);
    if (header.size() != std::size(columns)) throw DataError("series.csv: unexpected column count");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] != columns[i].name) throw DataError("series.csv: unexpected column '" + header[i] + "'");
    }

    std::vector<NormSample> samples;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_row(line);
        if (cells.size() != std::size(columns)) {
            throw DataError(fmt::format("series.csv: row {} has {} cells", row, cells.size()));
        }
        NormSample s;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            std::optional<double> v;
            if (!cells[i].empty()) {
                double d = 0.0;
                const auto* first = cells[i].data();
                const auto* last = first + cells[i].size();
                const auto [end, ec] = std::from_chars(first, last, d);
                if (ec != std::errc{} || end != last) {
                    throw DataError(fmt::format("series.csv: row {}, column {}: bad number '{}'", row,
                                                columns[i].name, cells[i]));
                }
                v = d;
            }
            columns[i].set(s, v);
        }
        samples.push_back(s);
    }
    return samples;
}

std::vector<NormSample> read_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return read_series_csv(in);
}

void write_summary(std::ostream& out, const NormSeries& series) {
    const auto& cfg = series.scenario;
    auto opt = [](const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string("undefined"); };

    fmt::print(out, "outcome: {}\n", to_string(series.outcome));
    fmt::print(out, "final_time: {}\n", series.final_time);
    if (!series.message.empty()) fmt::print(out, "message: {}\n", series.message);
    fmt::print(out, "samples: {}\n", series.samples.size());
    fmt::print(out, "mode: {}\n", to_string(cfg.mode));
    out << '\n';

    out << "# dissipation bound: grad_energy <= C * norm_E_sq\n";
    fmt::print(out, "c_fit: {}\n", opt(series.bound.c_fit));
    fmt::print(out, "c_max: {}\n", opt(series.bound.c_max));
    fmt::print(out, "samples_used: {}\n", series.bound.samples_used);
    out << '\n';

    out << "# blow-up accumulator: sum_k norm_E_sq(t_k) * dt_k\n";
    fmt::print(out, "accumulator: {}\n", series.blowup.accumulator);
    fmt::print(out, "accumulator_limit_estimate: {}\n", opt(accumulator_limit(series.samples)));
    fmt::print(out, "threshold: {}\n", series.blowup.threshold);
    fmt::print(out, "tripped: {}\n", series.blowup.tripped ? "yes" : "no");
    if (series.blowup.tripped) {
        out << "interpretation: either the flow is approaching a loss of regularity, or the threshold is\n"
               "  under-calibrated for this mesh and model; the accumulator alone cannot tell them apart.\n";
    } else {
        out << "interpretation: no trip; the accumulator stayed below the threshold, which is consistent with a\n"
               "  regular solution or with a threshold set too high for this mesh and model.\n";
    }
    out << '\n';

    double max_delta = 0.0;
    double max_T_h2 = 0.0;
    bool all_in_regime = true;
    double max_div = 0.0;
    for (const auto& s : series.samples) {
        max_delta = std::max(max_delta, s.regime.delta_T_rel);
        max_T_h2 = std::max(max_T_h2, s.regime.T_h2_norm);
        all_in_regime = all_in_regime && s.regime.in_regime;
        max_div = std::max(max_div, s.max_div);
    }
    out << "# quasi-incompressible regime: max |T - T0| / T0 < 0.02\n";
    fmt::print(out, "all_in_regime: {}\n", all_in_regime ? "yes" : "no");
    fmt::print(out, "max_delta_T_rel: {}\n", max_delta);
    fmt::print(out, "max_T_h2_norm: {}\n", max_T_h2);
    fmt::print(out, "max_divergence: {}\n", max_div);
    fmt::print(out, "norm_B: {}\n", opt(series.norm_B));
}

std::vector<std::filesystem::path> export_plot_data(std::span<const NormSample> samples,
                                                    const std::filesystem::path& dir) {
    if (samples.empty()) throw DataError("export: empty series");
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    for (const auto& c : columns) {
        if (c.name == "t") continue;
        auto path = dir / (std::string(c.name) + ".csv");
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + path.string());
        fmt::print(out, "# {}: {}\n", c.name, c.description);
        out << "# columns: t = time, value = " << c.name << '\n';
        out << "t,value\n";
        for (const auto& s : samples) out << format_cell(s.t) << ',' << format_cell(c.get(s)) << '\n';
        if (!out) throw Error("write failed for " + path.string());
        written.push_back(std::move(path));
    }
    return written;
}

} // namespace pem
