#pragma once

// Experiment orchestration and serialization: entropy traces, Schmidt-mode
// comparisons, asymptotic-entropy sweeps and the self-validation suite.
// Payloads are CSV (or JSON) with '#' comment headers echoing the full
// configuration; a JSON manifest with derived parameters, diagnostics and
// timings is always written next to the payload. Floats in CSV use 12
// significant digits, so identical configurations produce byte-identical
// files regardless of the worker count.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "entangle/asymptotics.hpp"
#include "entangle/config.hpp"
#include "entangle/errors.hpp"
#include "entangle/evolution.hpp"
#include "entangle/model.hpp"
#include "entangle/parallel.hpp"
#include "entangle/propagators.hpp"
#include "entangle/schmidt.hpp"

namespace entangle {

inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline const char* experiment_name(Experiment e) {
    switch (e) {
        case Experiment::trace: return "trace";
        case Experiment::modes: return "modes";
        case Experiment::asymptotic: return "asymptotic";
        case Experiment::sweep: return "sweep";
        case Experiment::validate: return "validate";
    }
    return "?";
}

inline const char* sweep_axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::q: return "q";
        case SweepAxis::v0: return "v0";
        case SweepAxis::mass_ratio: return "mass_ratio";
    }
    return "?";
}

namespace detail {

/// Simple table payload: comment lines, a header, rows of optional doubles
/// (missing values serialize as empty CSV cells / JSON nulls).
struct Table {
    std::vector<std::string> comments;        ///< without the leading '#'
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;    ///< NaN marks a missing value
    std::vector<std::string> tail_comments;

    void write_csv(std::ostream& os) const {
        for (const auto& c : comments) os << "# " << c << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            os << columns[i] << (i + 1 < columns.size() ? "," : "");
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (!std::isnan(row[i])) os << fmt12(row[i]);
                if (i + 1 < row.size()) os << ",";
            }
            os << "\n";
        }
        for (const auto& c : tail_comments) os << "# " << c << "\n";
    }

    void write_json(std::ostream& os) const {
        nlohmann::json j;
        j["comments"] = comments;
        j["columns"] = columns;
        auto rows_j = nlohmann::json::array();
        for (const auto& row : rows) {
            auto r = nlohmann::json::array();
            for (double v : row) {
                if (std::isnan(v)) r.push_back(nullptr);
                else r.push_back(v);
            }
            rows_j.push_back(std::move(r));
        }
        j["rows"] = std::move(rows_j);
        j["tail_comments"] = tail_comments;
        os << j.dump(2) << "\n";
    }

    void write(const std::string& path, OutputFormat fmt) const {
        std::ofstream os(path);
        if (!os) throw ConfigError("cannot open output file: " + path);
        if (fmt == OutputFormat::csv) write_csv(os);
        else write_json(os);
    }
};

inline void echo_config(Table& t, const RunConfig& c, const DerivedParams& d, double grid_l) {
    const auto& p = c.params;
    t.comments.push_back(std::string("experiment = ") + experiment_name(c.experiment));
    t.comments.push_back("m1 = " + fmt12(p.m1) + "  m2 = " + fmt12(p.m2) +
                         "  v0 = " + fmt12(p.v0) + "  a = " + fmt12(p.a) +
                         "  q = " + fmt12(p.q) + "  sigma = " + fmt12(p.sigma) +
                         "  hbar = " + fmt12(p.hbar));
    t.comments.push_back("grid_n = " + std::to_string(c.grid_n) +
                         "  grid_l = " + fmt12(grid_l) +
                         "  t_max_over_tc = " + fmt12(c.t_max_over_tc) +
                         "  t_steps = " + std::to_string(c.t_steps));
    t.comments.push_back("mu = " + fmt12(d.mu) + "  g = " + fmt12(d.g) +
                         "  alpha = " + fmt12(d.alpha) + "  v = " + fmt12(d.v) +
                         "  t_c = " + fmt12(d.t_c) +
                         "  t_c_total_mass_convention = " + fmt12(d.m * p.a / (p.hbar * p.q)));
}

inline nlohmann::json config_json(const RunConfig& c, double grid_l) {
    const auto& p = c.params;
    nlohmann::json j;
    j["m1"] = p.m1; j["m2"] = p.m2; j["v0"] = p.v0; j["a"] = p.a;
    j["q"] = p.q; j["sigma"] = p.sigma; j["hbar"] = p.hbar;
    j["grid_n"] = c.grid_n; j["grid_l"] = grid_l;
    j["t_max_over_tc"] = c.t_max_over_tc; j["t_steps"] = c.t_steps;
    j["experiment"] = experiment_name(c.experiment);
    j["format"] = c.format == OutputFormat::csv ? "csv" : "json";
    j["dy_scale"] = c.dy_scale;
    return j;
}

inline nlohmann::json derived_json(const PhysParams& p, const DerivedParams& d) {
    nlohmann::json j;
    j["m"] = d.m; j["mu"] = d.mu; j["alpha1"] = d.alpha1; j["alpha2"] = d.alpha2;
    j["alpha"] = d.alpha; j["g"] = d.g; j["a1"] = d.a1; j["a2"] = d.a2;
    j["v"] = d.v; j["t_c"] = d.t_c; j["u1"] = d.u1; j["u2"] = d.u2;
    j["t_c_total_mass_convention"] = d.m * p.a / (p.hbar * p.q);
    return j;
}

inline void write_manifest(const std::string& path, const nlohmann::json& j) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open manifest file: " + path);
    os << j.dump(2) << "\n";
}

inline std::string default_output(const RunConfig& c) {
    if (!c.output_path.empty()) return c.output_path;
    return std::string(experiment_name(c.experiment)) +
           (c.format == OutputFormat::csv ? ".csv" : ".json");
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

} // namespace detail

struct TraceResult {
    EntropyTrace trace;
    DerivedParams derived;
    Grid1D grid;
    double asymptotic_S = 0.0;
    std::string payload_path;
    std::string manifest_path;
    bool partial = false;
};

inline TraceResult run_trace(const RunConfig& cfg) {
    validate(cfg);
    detail::Timer timer;
    const auto& p = cfg.params;
    const auto d = derive(p);
    const auto grid = run_grid(cfg, d);
    const auto times = trace_times(cfg, d);

    QuadratureSpec spec;
    spec.dy_scale = cfg.dy_scale;
    TraceResult res;
    res.derived = d;
    res.grid = grid;
    res.asymptotic_S = asymptotic_entropy(p.q, d.g);
    res.trace = entropy_trace(times, p, d, grid, spec, worker_count(cfg.threads));
    res.partial = res.trace.partial;

    detail::Table t;
    detail::echo_config(t, cfg, d, grid.x_max);
    t.columns = {"t", "t_over_tc", "entropy", "norm2d", "p1", "p2", "p3", "p4"};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < res.trace.times.size(); ++i) {
        std::vector<double> row(8, nan);
        row[0] = res.trace.times[i];
        row[1] = res.trace.times[i] / d.t_c;
        row[2] = res.trace.entropy[i];
        row[3] = std::isnan(res.trace.entropy[i]) ? nan : res.trace.norms[i];
        const auto& sp = res.trace.spectra[i];
        for (std::size_t k = 0; k < sp.size() && k < 4; ++k) row[4 + k] = sp[k];
        t.rows.push_back(std::move(row));
    }
    t.tail_comments.push_back("asymptotic_entropy = " + fmt12(res.asymptotic_S));

    res.payload_path = detail::default_output(cfg);
    t.write(res.payload_path, cfg.format);

    nlohmann::json m;
    m["experiment"] = "trace";
    m["config"] = detail::config_json(cfg, grid.x_max);
    m["derived"] = detail::derived_json(p, d);
    m["payload"] = res.payload_path;
    m["asymptotic_entropy"] = res.asymptotic_S;
    m["warnings"] = validation_warnings(p);
    m["partial"] = res.trace.partial;
    m["failures"] = res.trace.failures;
    double nmin = 2.0, nmax = 0.0, rworst = 0.0;
    for (std::size_t i = 0; i < res.trace.norms.size(); ++i) {
        if (std::isnan(res.trace.entropy[i])) continue;
        nmin = std::min(nmin, res.trace.norms[i]);
        nmax = std::max(nmax, res.trace.norms[i]);
        rworst = std::max(rworst, std::abs(res.trace.relative_norms[i] - 1.0));
    }
    m["norm_diagnostics"] = {{"norm2d_min", nmin},
                             {"norm2d_max", nmax},
                             {"relative_norm_worst_deviation", rworst}};
    m["wall_time_seconds"] = timer.seconds();
    res.manifest_path = res.payload_path + ".manifest.json";
    detail::write_manifest(res.manifest_path, m);
    return res;
}

struct ModesResult {
    DerivedParams derived;
    Grid1D grid;
    double t_mode = 0.0;
    std::vector<double> p_top;         ///< top Schmidt probabilities
    double overlap_plus = 0.0;         ///< |<mode1 | Phi1_+>|
    double overlap_minus = 0.0;        ///< |<mode2 | Phi1_->|
    double mode_orthogonality = 0.0;   ///< |<mode1 | mode2>|
    std::string payload_path;
    std::string manifest_path;
};

inline ModesResult run_modes(const RunConfig& cfg) {
    validate(cfg);
    detail::Timer timer;
    const auto& p = cfg.params;
    const auto d = derive(p);
    const auto grid = run_grid(cfg, d);
    const double t_mode = cfg.mode_time_over_tc * d.t_c;

    QuadratureSpec spec;
    spec.dy_scale = cfg.dy_scale;
    const auto state = evolve_two_particle_state(grid, t_mode, p, d, spec,
                                                 worker_count(cfg.threads));
    SchmidtOptions so;
    so.max_modes = 2;
    const auto sp = schmidt(state.psi, so);
    const auto analytic = asymptotic_schmidt_modes(t_mode, d, p, grid);

    // Normalize the analytic factors on the grid before taking overlaps.
    auto normalized = [](ComplexField1D f) {
        const double n = trapezoid_norm(f);
        for (auto& z : f.values) z /= n;
        return f;
    };
    const auto phi_plus = normalized(analytic.Phi1_plus);
    const auto phi_minus = normalized(analytic.Phi1_minus);

    ModesResult res;
    res.derived = d;
    res.grid = grid;
    res.t_mode = t_mode;
    res.p_top = sp.p;
    if (sp.p.size() > 4) res.p_top.resize(4);
    const bool have2 = sp.modes1.size() >= 2;
    res.overlap_plus = std::abs(inner_product(sp.modes1[0], phi_plus));
    res.overlap_minus = have2 ? std::abs(inner_product(sp.modes1[1], phi_minus)) : 0.0;
    res.mode_orthogonality =
        have2 ? std::abs(inner_product(sp.modes1[0], sp.modes1[1])) : 0.0;

    detail::Table t;
    detail::echo_config(t, cfg, d, grid.x_max);
    t.comments.push_back("mode_time_over_tc = " + fmt12(cfg.mode_time_over_tc));
    t.columns = {"x1", "abs_mode1_num", "abs_mode2_num", "abs_Phi1_plus", "abs_Phi1_minus"};
    for (int i = 0; i < grid.n; ++i) {
        std::vector<double> row(5);
        row[0] = grid.point(i);
        row[1] = std::abs(sp.modes1[0].values[i]);
        row[2] = have2 ? std::abs(sp.modes1[1].values[i]) : 0.0;
        row[3] = std::abs(phi_plus.values[i]);
        row[4] = std::abs(phi_minus.values[i]);
        t.rows.push_back(std::move(row));
    }
    res.payload_path = detail::default_output(cfg);
    t.write(res.payload_path, cfg.format);

    nlohmann::json m;
    m["experiment"] = "modes";
    m["config"] = detail::config_json(cfg, grid.x_max);
    m["config"]["mode_time_over_tc"] = cfg.mode_time_over_tc;
    m["derived"] = detail::derived_json(p, d);
    m["payload"] = res.payload_path;
    m["t_mode"] = t_mode;
    m["overlap_mode1_Phi1_plus"] = res.overlap_plus;
    m["overlap_mode2_Phi1_minus"] = res.overlap_minus;
    m["mode_orthogonality"] = res.mode_orthogonality;
    m["schmidt_top"] = res.p_top;
    m["asymptotic_weights"] = {analytic.weight_T2, analytic.weight_R2};
    m["norm_diagnostics"] = {{"norm2d", state.norm2d}, {"relative_norm", state.relative_norm}};
    m["warnings"] = validation_warnings(p);
    m["wall_time_seconds"] = timer.seconds();
    res.manifest_path = res.payload_path + ".manifest.json";
    detail::write_manifest(res.manifest_path, m);
    return res;
}

struct SweepPoint {
    double axis_value;
    double asymptotic_S;
    double numeric_plateau;  ///< NaN unless with_numeric
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::string payload_path;
    std::string manifest_path;
};

inline SweepResult run_sweep(const RunConfig& cfg) {
    validate(cfg);
    detail::Timer timer;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    SweepResult res;
    std::vector<std::string> failures;
    for (int i = 0; i < cfg.sweep_steps; ++i) {
        const double val =
            cfg.sweep_lo + (cfg.sweep_hi - cfg.sweep_lo) * i / (cfg.sweep_steps - 1);
        PhysParams p = cfg.params;
        switch (cfg.sweep_axis) {
            case SweepAxis::q: p.q = val; break;
            case SweepAxis::v0: p.v0 = val; break;
            case SweepAxis::mass_ratio: p.m2 = val * p.m1; break;
        }
        SweepPoint pt{val, nan, nan};
        try {
            const auto d = derive(p);
            pt.asymptotic_S = asymptotic_entropy(p.q, d.g);
            if (cfg.with_numeric) {
                RunConfig sub = cfg;
                sub.params = p;
                const auto d2 = derive(p);
                const auto grid = run_grid(sub, d2);
                const std::vector<double> ts = {2.5 * d2.t_c, 2.75 * d2.t_c, 3.0 * d2.t_c};
                QuadratureSpec spec;
                spec.dy_scale = cfg.dy_scale;
                const auto trc =
                    entropy_trace(ts, p, d2, grid, spec, worker_count(cfg.threads));
                double s = 0.0;
                int k = 0;
                for (double e : trc.entropy)
                    if (!std::isnan(e)) { s += e; ++k; }
                if (k > 0) pt.numeric_plateau = s / k;
            }
        } catch (const Error& e) {
            failures.push_back("axis=" + fmt12(val) + ": " + e.what());
        }
        res.points.push_back(pt);
    }

    const auto d0 = derive(cfg.params);
    detail::Table t;
    detail::echo_config(t, cfg, d0, cfg.grid_l);
    t.comments.push_back(std::string("sweep_axis = ") + sweep_axis_name(cfg.sweep_axis) +
                         "  range = [" + fmt12(cfg.sweep_lo) + ", " + fmt12(cfg.sweep_hi) +
                         "]  steps = " + std::to_string(cfg.sweep_steps));
    t.columns = {"axis_value", "asymptotic_entropy"};
    if (cfg.with_numeric) t.columns.push_back("numeric_plateau_entropy");
    for (const auto& pt : res.points) {
        std::vector<double> row = {pt.axis_value, pt.asymptotic_S};
        if (cfg.with_numeric) row.push_back(pt.numeric_plateau);
        t.rows.push_back(std::move(row));
    }
    res.payload_path = detail::default_output(cfg);
    t.write(res.payload_path, cfg.format);

    nlohmann::json m;
    m["experiment"] = "sweep";
    m["config"] = detail::config_json(cfg, cfg.grid_l);
    m["config"]["sweep_axis"] = sweep_axis_name(cfg.sweep_axis);
    m["config"]["sweep_range"] = {cfg.sweep_lo, cfg.sweep_hi, cfg.sweep_steps};
    m["config"]["with_numeric"] = cfg.with_numeric;
    m["payload"] = res.payload_path;
    m["failures"] = failures;
    m["wall_time_seconds"] = timer.seconds();
    res.manifest_path = res.payload_path + ".manifest.json";
    detail::write_manifest(res.manifest_path, m);
    return res;
}

struct AsymptoticResult {
    DerivedParams derived;
    double T2 = 0.0, R2 = 0.0, S = 0.0;
    std::string payload_path;
    std::string manifest_path;
};

inline AsymptoticResult run_asymptotic(const RunConfig& cfg) {
    validate(cfg);
    const auto& p = cfg.params;
    const auto d = derive(p);
    AsymptoticResult res;
    res.derived = d;
    const cdouble T = p.q / cdouble(p.q, -d.g);
    res.T2 = std::norm(T);
    res.R2 = 1.0 - res.T2;
    res.S = asymptotic_entropy(p.q, d.g);

    detail::Table t;
    detail::echo_config(t, cfg, d, cfg.grid_l);
    t.columns = {"q", "g", "t_c", "v", "abs_T_sq", "abs_R_sq", "asymptotic_entropy"};
    t.rows.push_back({p.q, d.g, d.t_c, d.v, res.T2, res.R2, res.S});
    res.payload_path = detail::default_output(cfg);
    t.write(res.payload_path, cfg.format);

    nlohmann::json m;
    m["experiment"] = "asymptotic";
    m["config"] = detail::config_json(cfg, cfg.grid_l);
    m["derived"] = detail::derived_json(p, d);
    m["payload"] = res.payload_path;
    m["abs_T_sq"] = res.T2;
    m["abs_R_sq"] = res.R2;
    m["asymptotic_entropy"] = res.S;
    m["warnings"] = validation_warnings(p);
    res.manifest_path = res.payload_path + ".manifest.json";
    detail::write_manifest(res.manifest_path, m);
    return res;
}

} // namespace entangle
