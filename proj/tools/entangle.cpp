// Command-line front end: trace | modes | asymptotic | sweep | validate.
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "entangle/config.hpp"
#include "entangle/runner.hpp"
#include "entangle/validate.hpp"

namespace {

struct CliState {
    entangle::RunConfig cfg;
    std::string config_path;
    std::string format = "csv";
    std::string sweep_axis = "q";
};

void add_common(CLI::App* sub, CliState& st) {
    sub->add_option("--config", st.config_path, "key=value config file");
    auto& p = st.cfg.params;
    sub->add_option("--m1", p.m1, "mass of particle 1");
    sub->add_option("--m2", p.m2, "mass of particle 2");
    sub->add_option("--v0", p.v0, "delta-potential strength (>0 attractive)");
    sub->add_option("--a", p.a, "initial mean separation");
    sub->add_option("--q", p.q, "initial relative wavenumber");
    sub->add_option("--sigma", p.sigma, "Gaussian width parameter");
    sub->add_option("--grid-n", st.cfg.grid_n, "grid points per axis");
    sub->add_option("--grid-l", st.cfg.grid_l, "grid half extent (0 = auto)");
    sub->add_option("--t-max", st.cfg.t_max_over_tc, "trace end time in units of t_c");
    sub->add_option("--t-steps", st.cfg.t_steps, "number of trace samples");
    sub->add_option("--out", st.cfg.output_path, "output payload path");
    sub->add_option("--format", st.format, "payload format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D two-particle delta-collision entanglement simulator"};
    app.require_subcommand(1);

    CliState st;

    auto* trace = app.add_subcommand("trace", "entropy vs time");
    auto* modes = app.add_subcommand("modes", "numerical vs analytic Schmidt modes");
    auto* asym = app.add_subcommand("asymptotic", "closed-form amplitudes and entropy");
    auto* sweep = app.add_subcommand("sweep", "asymptotic entropy across a parameter axis");
    auto* validate_cmd = app.add_subcommand("validate", "run the invariant suite");

    for (auto* sub : {trace, modes, asym, sweep, validate_cmd}) add_common(sub, st);

    modes->add_option("--mode-time", st.cfg.mode_time_over_tc,
                      "comparison time in units of t_c (default 2)");
    sweep->add_option("--sweep-axis", st.sweep_axis, "q|v0|mass_ratio")
        ->check(CLI::IsMember({"q", "v0", "mass_ratio"}));
    sweep->add_option("--sweep-lo", st.cfg.sweep_lo, "axis start");
    sweep->add_option("--sweep-hi", st.cfg.sweep_hi, "axis end");
    sweep->add_option("--sweep-steps", st.cfg.sweep_steps, "axis sample count");
    sweep->add_flag("--with-numeric", st.cfg.with_numeric,
                    "also compute the numerical plateau entropy per point");
    validate_cmd->add_option("--dy-scale", st.cfg.dy_scale,
                             "coarsen the quadrature step by this factor");

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* sub = app.get_subcommands().front();
        // config file first, explicit flags win
        if (!st.config_path.empty()) {
            entangle::RunConfig file_cfg;
            entangle::load_config_file(st.config_path, file_cfg);
            auto merge = [&](const std::string& flag, auto& dst, const auto& file_val) {
                if (sub->count(flag) == 0) dst = file_val;
            };
            merge("--m1", st.cfg.params.m1, file_cfg.params.m1);
            merge("--m2", st.cfg.params.m2, file_cfg.params.m2);
            merge("--v0", st.cfg.params.v0, file_cfg.params.v0);
            merge("--a", st.cfg.params.a, file_cfg.params.a);
            merge("--q", st.cfg.params.q, file_cfg.params.q);
            merge("--sigma", st.cfg.params.sigma, file_cfg.params.sigma);
            st.cfg.params.hbar = file_cfg.params.hbar;
            merge("--grid-n", st.cfg.grid_n, file_cfg.grid_n);
            merge("--grid-l", st.cfg.grid_l, file_cfg.grid_l);
            merge("--t-max", st.cfg.t_max_over_tc, file_cfg.t_max_over_tc);
            merge("--t-steps", st.cfg.t_steps, file_cfg.t_steps);
        }
        st.cfg.format =
            st.format == "json" ? entangle::OutputFormat::json : entangle::OutputFormat::csv;
        if (st.sweep_axis == "v0") st.cfg.sweep_axis = entangle::SweepAxis::v0;
        else if (st.sweep_axis == "mass_ratio") st.cfg.sweep_axis = entangle::SweepAxis::mass_ratio;
        else st.cfg.sweep_axis = entangle::SweepAxis::q;

        if (sub == trace) {
            st.cfg.experiment = entangle::Experiment::trace;
            const auto res = entangle::run_trace(st.cfg);
            std::printf("trace: %zu samples -> %s (asymptotic entropy %s)\n",
                        res.trace.times.size(), res.payload_path.c_str(),
                        entangle::fmt12(res.asymptotic_S).c_str());
            if (res.partial)
                std::fprintf(stderr, "warning: %zu sample(s) failed; trace is partial "
                                     "(see %s)\n",
                             res.trace.failures.size(), res.manifest_path.c_str());
        } else if (sub == modes) {
            st.cfg.experiment = entangle::Experiment::modes;
            const auto res = entangle::run_modes(st.cfg);
            std::printf("modes: overlaps |<mode1|Phi1+>| = %s  |<mode2|Phi1->| = %s -> %s\n",
                        entangle::fmt12(res.overlap_plus).c_str(),
                        entangle::fmt12(res.overlap_minus).c_str(), res.payload_path.c_str());
        } else if (sub == asym) {
            st.cfg.experiment = entangle::Experiment::asymptotic;
            const auto res = entangle::run_asymptotic(st.cfg);
            std::printf("asymptotic: |T|^2 = %s  |R|^2 = %s  S = %s -> %s\n",
                        entangle::fmt12(res.T2).c_str(), entangle::fmt12(res.R2).c_str(),
                        entangle::fmt12(res.S).c_str(), res.payload_path.c_str());
        } else if (sub == sweep) {
            st.cfg.experiment = entangle::Experiment::sweep;
            const auto res = entangle::run_sweep(st.cfg);
            std::printf("sweep: %zu points -> %s\n", res.points.size(),
                        res.payload_path.c_str());
        } else {
            st.cfg.experiment = entangle::Experiment::validate;
            const auto rep = entangle::run_validation(st.cfg);
            for (const auto& c : rep.checks)
                std::printf("[%s] %-55s residual = %.3e  (tol %.1e)%s%s\n",
                            c.pass ? "PASS" : "FAIL", c.name.c_str(), c.residual,
                            c.tolerance, c.note.empty() ? "" : "  ",
                            c.note.c_str());
            if (!rep.all_pass()) {
                std::fprintf(stderr, "validation failed\n");
                return 2;
            }
            std::printf("all checks passed\n");
        }
    } catch (const entangle::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const entangle::ParameterError& e) {
        std::fprintf(stderr, "parameter error: %s\n", e.what());
        return 1;
    } catch (const entangle::Error& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
