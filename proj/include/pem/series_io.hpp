#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pem/simulation.hpp"

namespace pem {

// One flattened NormSample field, in series.csv column order.
struct SeriesColumn {
    std::string_view name;
    std::string_view description;
    std::optional<double> (*get)(const NormSample&);
    void (*set)(NormSample&, std::optional<double>);
};

std::span<const SeriesColumn> series_columns();

// RFC-4180 style: header row, then one row per sample. Numbers use the
// shortest representation that round-trips; an undefined ratio is empty.
void write_series_csv(std::ostream& out, std::span<const NormSample> samples);
// Throws DataError on a header mismatch or unparsable cell.
std::vector<NormSample> read_series_csv(std::istream& in);
std::vector<NormSample> read_series_csv(const std::filesystem::path& path);

void write_summary(std::ostream& out, const NormSeries& series);

// One tidy file per diagnostic column: `#` comment lines, a `t,value`
// header and one row per sample. Returns the files written.
std::vector<std::filesystem::path> export_plot_data(std::span<const NormSample> samples,
                                                    const std::filesystem::path& dir);

} // namespace pem
