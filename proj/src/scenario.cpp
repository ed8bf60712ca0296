#include "pem/scenario.hpp"

#include <fmt/format.h>

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "pem/errors.hpp"

namespace pem {

ThermoParams ScenarioConfig::thermo_params() const {
    ThermoParams p = thermo;
    p.Q.reset();
    if (heat_source != 0.0) {
        RealField q(grid, 1);
        for (double& v : q.data()) v = heat_source;
        p.Q = std::move(q);
    }
    return p;
}

void ScenarioConfig::validate() const {
    std::vector<std::string> problems;
    auto collect = [&](auto&& check) {
        try {
            check();
        } catch (const ConfigError& e) {
            problems.insert(problems.end(), e.problems().begin(), e.problems().end());
        }
    };
    collect([&] { solver.validate(); });
    collect([&] { thermo.validate(); });
    if (!(T0 > 0.0)) problems.push_back("T0 must be > 0");
    if (std::abs(solver.nu - thermo.nu()) > 1e-12 * std::max(thermo.nu(), 1e-300)) {
        problems.push_back("nu must equal mu/rho");
    }
    if (output_every < 1) problems.push_back("output_every must be >= 1");
    if (checkpoint_every < 0) problems.push_back("checkpoint_every must be >= 0");
    if (!std::isfinite(heat_source)) problems.push_back("Q must be finite");
    if (!(blowup_threshold >= 0.0)) problems.push_back("blowup_threshold must be >= 0");
    if (ic.kind == InitialKind::taylor_green_2d && grid.dim() != 2) problems.push_back("taylor_green_2d requires dim = 2");
    if (ic.kind == InitialKind::taylor_green_3d && grid.dim() != 3) problems.push_back("taylor_green_3d requires dim = 3");
    if (ic.spectrum_peak < 1) problems.push_back("spectrum_peak must be >= 1");
    if (!problems.empty()) throw ConfigError(std::move(problems));
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
    auto same_thermo = [](const ThermoParams& x, const ThermoParams& y) {
        return x.rho == y.rho && x.R == y.R && x.c_v == y.c_v && x.mu == y.mu && x.source_factor == y.source_factor &&
               x.Q == y.Q;
    };
    return a.grid == b.grid && a.ic.kind == b.ic.kind && a.ic.amplitude == b.ic.amplitude && a.ic.seed == b.ic.seed &&
           a.ic.spectrum_peak == b.ic.spectrum_peak && a.solver.dt == b.solver.dt && a.solver.t_end == b.solver.t_end &&
           a.solver.nu == b.solver.nu && a.solver.scheme == b.solver.scheme &&
           a.solver.cfl_safety == b.solver.cfl_safety && same_thermo(a.thermo, b.thermo) &&
           a.heat_source == b.heat_source && a.T0 == b.T0 && a.P0 == b.P0 && a.mode == b.mode &&
           a.blowup_threshold == b.blowup_threshold && a.output_every == b.output_every &&
           a.checkpoint_every == b.checkpoint_every && a.output_dir == b.output_dir && a.seed == b.seed;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<double> to_double(std::string_view s) {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

template <typename Int>
std::optional<Int> to_integer(std::string_view s) {
    Int v{};
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) return std::nullopt;
    return v;
}

// Raw values gathered from the document before they are applied.
struct Entry {
    std::string value;
    int line = 0;
};

using Setter = std::function<std::optional<std::string>(ScenarioConfig&, std::string_view)>;

template <typename F>
Setter real_setter(F assign) {
    return [assign](ScenarioConfig& c, std::string_view v) -> std::optional<std::string> {
        const auto d = to_double(v);
        if (!d) return "expected a real number, got '" + std::string(v) + "'";
        assign(c, *d);
        return std::nullopt;
    };
}

template <typename Int, typename F>
Setter int_setter(F assign) {
    return [assign](ScenarioConfig& c, std::string_view v) -> std::optional<std::string> {
        const auto i = to_integer<Int>(v);
        if (!i) return "expected an integer, got '" + std::string(v) + "'";
        assign(c, *i);
        return std::nullopt;
    };
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"grid.dim", int_setter<int>([](ScenarioConfig& c, int v) { c.grid = GridSpec(v, c.grid.n()); })},
        {"grid.n", int_setter<int>([](ScenarioConfig& c, int v) { c.grid = GridSpec(c.grid.dim(), v); })},
        {"initial.kind",
         [](ScenarioConfig& c, std::string_view v) -> std::optional<std::string> {
             for (auto k : {InitialKind::taylor_green_2d, InitialKind::taylor_green_3d, InitialKind::random_divfree}) {
                 if (v == to_string(k)) {
                     c.ic.kind = k;
                     return std::nullopt;
                 }
             }
             return "unknown initial condition '" + std::string(v) +
                    "' (taylor_green_2d, taylor_green_3d, random_divfree)";
         }},
        {"initial.amplitude", real_setter([](ScenarioConfig& c, double v) { c.ic.amplitude = v; })},
        {"initial.spectrum_peak", int_setter<int>([](ScenarioConfig& c, int v) { c.ic.spectrum_peak = v; })},
        {"solver.dt", real_setter([](ScenarioConfig& c, double v) { c.solver.dt = v; })},
        {"solver.t_end", real_setter([](ScenarioConfig& c, double v) { c.solver.t_end = v; })},
        {"solver.nu", real_setter([](ScenarioConfig& c, double v) { c.solver.nu = v; })},
        {"solver.scheme",
         [](ScenarioConfig& c, std::string_view v) -> std::optional<std::string> {
             if (v != "rk4") return "unknown scheme '" + std::string(v) + "' (rk4)";
             c.solver.scheme = Scheme::rk4;
             return std::nullopt;
         }},
        {"solver.cfl_safety", real_setter([](ScenarioConfig& c, double v) { c.solver.cfl_safety = v; })},
        {"thermo.rho", real_setter([](ScenarioConfig& c, double v) { c.thermo.rho = v; })},
        {"thermo.R", real_setter([](ScenarioConfig& c, double v) { c.thermo.R = v; })},
        {"thermo.c_v", real_setter([](ScenarioConfig& c, double v) { c.thermo.c_v = v; })},
        {"thermo.mu", real_setter([](ScenarioConfig& c, double v) { c.thermo.mu = v; })},
        {"thermo.T0", real_setter([](ScenarioConfig& c, double v) { c.T0 = v; })},
        {"thermo.P0", real_setter([](ScenarioConfig& c, double v) { c.P0 = v; })},
        {"thermo.Q", real_setter([](ScenarioConfig& c, double v) { c.heat_source = v; })},
        {"thermo.source_factor", real_setter([](ScenarioConfig& c, double v) { c.thermo.source_factor = v; })},
        {"diagnostics.mode",
         [](ScenarioConfig& c, std::string_view v) -> std::optional<std::string> {
             for (auto m : {DerivativeMode::finite_difference, DerivativeMode::model_rhs}) {
                 if (v == to_string(m)) {
                     c.mode = m;
                     return std::nullopt;
                 }
             }
             return "unknown mode '" + std::string(v) + "' (finite_difference, model_rhs)";
         }},
        {"diagnostics.blowup_threshold", real_setter([](ScenarioConfig& c, double v) { c.blowup_threshold = v; })},
        {"diagnostics.output_every", int_setter<int>([](ScenarioConfig& c, int v) { c.output_every = v; })},
        {"diagnostics.checkpoint_every", int_setter<int>([](ScenarioConfig& c, int v) { c.checkpoint_every = v; })},
        {"run.seed", int_setter<std::uint64_t>([](ScenarioConfig& c, std::uint64_t v) { c.seed = v; })},
        {"run.output_dir",
         [](ScenarioConfig& c, std::string_view v) -> std::optional<std::string> {
             if (v.empty()) return "output_dir must not be empty";
             c.output_dir = std::string(v);
             return std::nullopt;
         }},
    };
    return table;
}

} // namespace

ScenarioConfig parse_config(std::string_view text) {
    std::vector<std::string> problems;
    std::map<std::string, Entry> entries;
    std::string section;

    int line_no = 0;
    std::istringstream stream{std::string(text)};
    for (std::string raw; std::getline(stream, raw);) {
        ++line_no;
        auto line = raw.substr(0, raw.find('#'));
        const auto body = trim(line);
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']') {
                problems.push_back(fmt::format("line {}: malformed section header", line_no));
                continue;
            }
            section = std::string(trim(body.substr(1, body.size() - 2)));
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            problems.push_back(fmt::format("line {}: expected 'key = value'", line_no));
            continue;
        }
        const auto key = std::string(trim(body.substr(0, eq)));
        const auto value = std::string(trim(body.substr(eq + 1)));
        const auto full = section.empty() ? key : section + "." + key;
        if (!setters().contains(full)) {
            problems.push_back(fmt::format("line {}: unknown key '{}'", line_no, full));
            continue;
        }
        if (auto it = entries.find(full); it != entries.end()) {
            problems.push_back(fmt::format("line {}: duplicate key '{}' (first set on line {})", line_no, full,
                                           it->second.line));
            continue;
        }
        entries[full] = Entry{value, line_no};
    }

    ScenarioConfig cfg;
    auto line_of = [&](const std::string& key) {
        auto it = entries.find(key);
        return it == entries.end() ? std::string("default") : fmt::format("line {}", it->second.line);
    };

    // The grid is validated as a unit so n and dim errors carry their own lines.
    int dim = cfg.grid.dim();
    int n = cfg.grid.n();
    bool grid_ok = true;
    for (const char* key : {"grid.dim", "grid.n"}) {
        auto it = entries.find(key);
        if (it == entries.end()) continue;
        const auto v = to_integer<int>(it->second.value);
        if (!v) {
            problems.push_back(fmt::format("line {}: {}: expected an integer, got '{}'", it->second.line, key,
                                           it->second.value));
            grid_ok = false;
            continue;
        }
        (std::string_view(key) == "grid.dim" ? dim : n) = *v;
    }
    if (grid_ok) {
        if (dim != 2 && dim != 3) {
            problems.push_back(fmt::format("{}: dim must be 2 or 3", line_of("grid.dim")));
            grid_ok = false;
        }
        if (n < 8 || !std::has_single_bit(static_cast<unsigned>(n))) {
            problems.push_back(fmt::format("{}: n must be a power of two and at least 8", line_of("grid.n")));
            grid_ok = false;
        }
        if (grid_ok) cfg.grid = GridSpec(dim, n);
    }

    for (const auto& [key, entry] : entries) {
        if (key == "grid.dim" || key == "grid.n") continue;
        if (auto err = setters().at(key)(cfg, entry.value)) {
            problems.push_back(fmt::format("line {}: {}: {}", entry.line, key, *err));
        }
    }

    cfg.ic.seed = cfg.seed;
    // P0 and T0 are tied by the equation of state; P0 alone sets T0.
    const double rhoR = cfg.thermo.rho * cfg.thermo.R;
    const bool has_T0 = entries.contains("thermo.T0");
    const bool has_P0 = entries.contains("thermo.P0");
    if (has_P0 && !has_T0 && rhoR > 0.0) cfg.T0 = cfg.P0 / rhoR;
    if (has_P0 && has_T0 && std::abs(cfg.P0 - rhoR * cfg.T0) > 1e-9 * std::abs(cfg.P0)) {
        problems.push_back(fmt::format("{}: P0 must equal rho*R*T0", line_of("thermo.P0")));
    }
    cfg.P0 = rhoR * cfg.T0;
    // nu follows mu/rho unless given explicitly.
    if (!entries.contains("solver.nu") && cfg.thermo.rho > 0.0) cfg.solver.nu = cfg.thermo.nu();

    if (problems.empty() && grid_ok) {
        try {
            cfg.validate();
        } catch (const ConfigError& e) {
            for (const auto& p : e.problems()) problems.push_back("invariant: " + p);
        }
    }
    if (!problems.empty()) throw ConfigError(std::move(problems));
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string to_config_text(const ScenarioConfig& c) {
    std::string out;
    auto add = [&](std::string_view line) {
        out += line;
        out += '\n';
    };
    add("[grid]");
    add(fmt::format("dim = {}", c.grid.dim()));
    add(fmt::format("n = {}", c.grid.n()));
    add("");
    add("[initial]");
    add(fmt::format("kind = {}", to_string(c.ic.kind)));
    add(fmt::format("amplitude = {}", c.ic.amplitude));
    add(fmt::format("spectrum_peak = {}", c.ic.spectrum_peak));
    add("");
    add("[solver]");
    add(fmt::format("dt = {}", c.solver.dt));
    add(fmt::format("t_end = {}", c.solver.t_end));
    add(fmt::format("nu = {}", c.solver.nu));
    add("scheme = rk4");
    add(fmt::format("cfl_safety = {}", c.solver.cfl_safety));
    add("");
    add("[thermo]");
    add(fmt::format("rho = {}", c.thermo.rho));
    add(fmt::format("R = {}", c.thermo.R));
    add(fmt::format("c_v = {}", c.thermo.c_v));
    add(fmt::format("mu = {}", c.thermo.mu));
    add(fmt::format("T0 = {}", c.T0));
    add(fmt::format("Q = {}", c.heat_source));
    if (c.thermo.source_factor) add(fmt::format("source_factor = {}", *c.thermo.source_factor));
    add("");
    add("[diagnostics]");
    add(fmt::format("mode = {}", to_string(c.mode)));
    add(fmt::format("blowup_threshold = {}", c.blowup_threshold));
    add(fmt::format("output_every = {}", c.output_every));
    add(fmt::format("checkpoint_every = {}", c.checkpoint_every));
    add("");
    add("[run]");
    add(fmt::format("seed = {}", c.seed));
    add(fmt::format("output_dir = {}", c.output_dir.string()));
    return out;
}

} // namespace pem
