#pragma once

// Run configuration: flat key=value files plus programmatic overrides.
// Recognized file keys: m1, m2, v0, a, q, sigma, hbar, grid_n, grid_l,
// t_max_over_tc, t_steps. Anything else is an error.

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "entangle/errors.hpp"
#include "entangle/model.hpp"

namespace entangle {

enum class Experiment { trace, modes, asymptotic, sweep, validate };
enum class OutputFormat { csv, json };
enum class SweepAxis { q, v0, mass_ratio };

struct RunConfig {
    PhysParams params;
    int grid_n = 512;
    double grid_l = 0.0;          ///< half extent; 0 -> auto from the extent rule
    double t_max_over_tc = 3.0;
    int t_steps = 60;
    std::string output_path;      ///< empty -> "<experiment>.csv"
    OutputFormat format = OutputFormat::csv;
    Experiment experiment = Experiment::trace;

    SweepAxis sweep_axis = SweepAxis::q;
    double sweep_lo = 1.0;
    double sweep_hi = 10.0;
    int sweep_steps = 19;
    bool with_numeric = false;

    double mode_time_over_tc = 2.0;
    double dy_scale = 1.0;        ///< quadrature coarsening knob (validate)
    unsigned threads = 0;         ///< 0 -> hardware, capped by ENTANGLE_THREADS
};

inline void validate(const RunConfig& c) {
    validate(c.params);
    if (c.grid_n < 2) throw ConfigError("grid_n must be >= 2");
    if (c.grid_l < 0.0) throw ConfigError("grid_l must be positive (or 0 for auto)");
    if (!(c.t_max_over_tc > 0.0)) throw ConfigError("t_max_over_tc must be positive");
    if (c.t_steps < 2) throw ConfigError("t_steps must be >= 2");
    if (c.experiment == Experiment::sweep) {
        if (!(c.sweep_lo < c.sweep_hi)) throw ConfigError("sweep range needs lo < hi");
        if (c.sweep_steps < 2) throw ConfigError("sweep needs at least 2 steps");
    }
    if (!(c.mode_time_over_tc > 0.0)) throw ConfigError("mode time must be positive");
    if (!(c.dy_scale > 0.0)) throw ConfigError("dy scale must be positive");
}

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline double parse_number(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw ConfigError("config: key '" + key + "' has non-numeric value '" + value + "'");
    return v;
}

inline int parse_count(const std::string& key, const std::string& value) {
    const double v = parse_number(key, value);
    const int n = static_cast<int>(v);
    if (static_cast<double>(n) != v)
        throw ConfigError("config: key '" + key + "' must be an integer");
    return n;
}

} // namespace detail

/// Resolved grid for a run: configured extent or the default extent rule.
inline Grid1D run_grid(const RunConfig& c, const DerivedParams& d) {
    const double t_max = c.t_max_over_tc * d.t_c;
    const double L = c.grid_l > 0.0 ? c.grid_l : default_grid_extent(c.params, d, t_max);
    return Grid1D::symmetric(L, c.grid_n);
}

/// Uniform trace sample times, t/t_c in [0.1, t_max_over_tc].
inline std::vector<double> trace_times(const RunConfig& c, const DerivedParams& d) {
    const double lo = std::min(0.1, 0.5 * c.t_max_over_tc);
    const double hi = c.t_max_over_tc;
    std::vector<double> ts(c.t_steps);
    for (int i = 0; i < c.t_steps; ++i)
        ts[i] = d.t_c * (lo + (hi - lo) * i / (c.t_steps - 1));
    return ts;
}

/// Apply a flat key=value config file on top of cfg. '#' starts a comment.
inline void load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not key=value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key == "m1") cfg.params.m1 = detail::parse_number(key, value);
        else if (key == "m2") cfg.params.m2 = detail::parse_number(key, value);
        else if (key == "v0") cfg.params.v0 = detail::parse_number(key, value);
        else if (key == "a") cfg.params.a = detail::parse_number(key, value);
        else if (key == "q") cfg.params.q = detail::parse_number(key, value);
        else if (key == "sigma") cfg.params.sigma = detail::parse_number(key, value);
        else if (key == "hbar") cfg.params.hbar = detail::parse_number(key, value);
        else if (key == "grid_n") cfg.grid_n = detail::parse_count(key, value);
        else if (key == "grid_l") cfg.grid_l = detail::parse_number(key, value);
        else if (key == "t_max_over_tc") cfg.t_max_over_tc = detail::parse_number(key, value);
        else if (key == "t_steps") cfg.t_steps = detail::parse_count(key, value);
        else throw ConfigError("config: unknown key '" + key + "'");
    }
}

} // namespace entangle
