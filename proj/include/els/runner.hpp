#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "els/checkpoint.hpp"
#include "els/config.hpp"
#include "els/csv.hpp"
#include "els/diagnostics.hpp"
#include "els/dynamics.hpp"
#include "els/initial_data.hpp"
#include "els/svg.hpp"

namespace els {

inline void ensure_dir(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw IoError("cannot create directory '" + path + "': " + ec.message());
}

inline void write_resolved_config(const RunConfig& cfg, const std::string& dir) {
    std::ofstream f(dir + "/resolved_config.json");
    if (!f) throw IoError("cannot write resolved config in '" + dir + "'");
    f << resolved_config_json(cfg).dump(2) << "\n";
}

struct SimulationSummary {
    std::vector<StepReport> rows; ///< every step, regardless of the CSV cadence
    double max_abs_residual = 0.0;
    double max_drift = 0.0;
    double max_div = 0.0;
    State final_state;
};

/// Evolve the configured initial state to t_end. Writes resolved_config.json,
/// series.csv (one row per report_every steps, plus the first and last),
/// energy.svg, optional intermediate checkpoints, and final_state.bin.
inline SimulationSummary run_simulation(const RunConfig& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    write_resolved_config(cfg, out_dir);

    const Grid g = cfg.grid();
    State s = make_initial_state(g, cfg.initial);

    CsvWriter csv(out_dir + "/series.csv",
                  {"t", "E_kin", "E_elastic", "E_total", "D_visc", "D_rot", "energy_residual",
                   "d_drift", "div_u", "cfl"});
    const long nsteps = std::lround(cfg.solver.t_end / cfg.solver.dt);
    SimulationSummary sum;
    long index = 0;
    auto sink = [&](const StepReport& r) {
        sum.rows.push_back(r);
        sum.max_abs_residual = std::max(sum.max_abs_residual, std::abs(r.energy_residual));
        sum.max_drift = std::max(sum.max_drift, r.d_drift);
        sum.max_div = std::max(sum.max_div, r.div_u);
        if (index % cfg.outputs.report_every == 0 || index == nsteps)
            csv.row({r.t, r.e_kin, r.e_elastic, r.e_kin + r.e_elastic, r.d_visc, r.d_rot,
                     r.energy_residual, r.d_drift, r.div_u, r.cfl});
        ++index;
    };

    // run() owns the state during the loop, so when intermediate checkpoints
    // are requested the stepping is done explicitly here instead.
    if (cfg.outputs.checkpoint_every > 0) {
        ensure_dir(out_dir + "/checkpoints");
        Integrator integ(std::move(s), cfg.frank, cfg.leslie, cfg.solver);
        sink(integ.current_report());
        for (long i = 0; i < nsteps; ++i) {
            StepReport rep = integ.advance();
            if (i + 1 == nsteps && cfg.solver.renormalize_every > 1) {
                integ.renormalize_director();
                rep.d_drift = max_unit_deviation(integ.state().d);
            }
            sink(rep);
            if ((i + 1) % cfg.outputs.checkpoint_every == 0 && i + 1 < nsteps) {
                char name[64];
                std::snprintf(name, sizeof name, "/checkpoints/step_%08ld.bin", i + 1);
                write_checkpoint(out_dir + name, integ.state());
            }
        }
        sum.final_state = integ.state();
    } else {
        sum.final_state = run(std::move(s), cfg.frank, cfg.leslie, cfg.solver, sink);
    }
    write_checkpoint(out_dir + "/final_state.bin", sum.final_state);

    std::vector<PlotSeries> series(3);
    series[0].name = "E_kin";
    series[1].name = "E_elastic";
    series[2].name = "E_total";
    for (const StepReport& r : sum.rows) {
        series[0].x.push_back(r.t);
        series[0].y.push_back(r.e_kin);
        series[1].x.push_back(r.t);
        series[1].y.push_back(r.e_elastic);
        series[2].x.push_back(r.t);
        series[2].y.push_back(r.e_kin + r.e_elastic);
    }
    write_svg_plot(out_dir + "/energy.svg", "Energy decay", "t", "energy", series);
    return sum;
}

/// Run the base/perturbed pair and record the comparison functional against
/// its exponential bound. Writes twin_series.csv, twin.svg, and the two final
/// states.
inline TwinResult run_twin(const RunConfig& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    write_resolved_config(cfg, out_dir);

    const Grid g = cfg.grid();
    const State base = make_initial_state(g, cfg.initial);
    PerturbationSpec spec = cfg.experiment.perturbation;
    spec.epsilon = cfg.experiment.epsilon;
    TwinResult res = twin_experiment(base, cfg.frank, cfg.leslie, cfg.solver, spec,
                                     cfg.outputs.report_every, cfg.experiment.c_cap);

    CsvWriter csv(out_dir + "/twin_series.csv",
                  {"t", "phi", "phi_xi_l2", "phi_xi_h1", "phi_d", "m", "M_cum",
                   "dissipation_proxy", "gronwall_bound", "pass"});
    for (const TwinRow& r : res.rows)
        csv.row({r.t, r.phi, r.phi_xi_l2, r.phi_xi_h1, r.phi_d, r.m, r.m_cum,
                 r.dissipation_proxy, r.gronwall_bound, r.pass ? 1.0 : 0.0});

    std::vector<PlotSeries> series(2);
    series[0].name = "phi";
    series[1].name = "bound";
    for (const TwinRow& r : res.rows) {
        series[0].x.push_back(r.t);
        series[0].y.push_back(r.phi);
        series[1].x.push_back(r.t);
        series[1].y.push_back(r.gronwall_bound);
    }
    write_svg_plot(out_dir + "/twin.svg", "Separation vs. exponential bound", "t", "phi", series,
                   /*log_y=*/true);

    write_checkpoint(out_dir + "/final_state_a.bin", res.final_a);
    write_checkpoint(out_dir + "/final_state_b.bin", res.final_b);
    return res;
}

/// Evaluate the identity suite on the configured initial state and write
/// identity_report.csv (id, residual, tolerance, pass, description).
inline SuiteReport run_identities(const RunConfig& cfg, const std::string& out_dir,
                                  const IdentityOptions& opt = {}) {
    ensure_dir(out_dir);
    write_resolved_config(cfg, out_dir);

    const Grid g = cfg.grid();
    const State s = make_initial_state(g, cfg.initial);
    const SuiteReport rep = identity_suite(s, cfg.frank, cfg.leslie, opt);

    std::ofstream f(out_dir + "/identity_report.csv");
    if (!f) throw IoError("cannot write identity report in '" + out_dir + "'");
    f << "id,residual,tolerance,pass,description\n";
    for (const SuiteRow& r : rep.rows) {
        std::string desc = r.description;
        for (char& c : desc)
            if (c == ',') c = ';';
        f << r.id << "," << csv_number(r.residual) << "," << csv_number(r.tolerance) << ","
          << (r.pass ? 1 : 0) << "," << desc << "\n";
    }
    return rep;
}

struct SweepCase {
    double value = 0.0;
    std::string dir;
    TwinResult result;
};

struct SweepSummary {
    std::string axis;
    std::vector<SweepCase> cases;
    bool all_passed = true;
};

/// Materialize one twin config per sweep value.
inline RunConfig sweep_case_config(const RunConfig& cfg, const std::string& axis, double value) {
    RunConfig c = cfg;
    c.experiment.mode = "twin";
    c.experiment.sweep = {};
    if (axis == "epsilon") {
        c.experiment.epsilon = value;
        c.experiment.perturbation.epsilon = value;
    } else if (axis == "frank_delta") {
        c.frank.k2 = c.frank.k1 + value;
        c.frank.k3 = c.frank.k1 + value;
        if (!(c.frank.k2 > 0.0))
            throw ValidationError("sweep: frank_delta value " + std::to_string(value) +
                                  " makes k2, k3 non-positive");
    } else {
        throw ValidationError("sweep: unknown axis '" + axis + "'");
    }
    return c;
}

/// Run one twin experiment per sweep value, each in its own subdirectory, and
/// summarize in sweep_summary.csv plus an overlay plot of the separations.
inline SweepSummary run_sweep(const RunConfig& cfg, const std::string& out_dir, int threads = 1) {
    if (threads < 1) throw Error("sweep: threads must be >= 1");
    ensure_dir(out_dir);
    write_resolved_config(cfg, out_dir);

    const std::string axis = cfg.experiment.sweep.axis;
    const std::vector<double>& values = cfg.experiment.sweep.values;
    SweepSummary sum;
    sum.axis = axis;
    sum.cases.resize(values.size());

    auto run_case = [&](std::size_t i) {
        char name[64];
        std::snprintf(name, sizeof name, "/case_%02zu", i);
        const std::string dir = out_dir + name;
        const RunConfig c = sweep_case_config(cfg, axis, values[i]);
        sum.cases[i].value = values[i];
        sum.cases[i].dir = dir;
        sum.cases[i].result = run_twin(c, dir);
    };

    if (threads == 1 || values.size() <= 1) {
        for (std::size_t i = 0; i < values.size(); ++i) run_case(i);
    } else {
        std::vector<std::thread> pool;
        std::size_t next = 0;
        for (std::size_t i = 0; i < values.size(); i += threads) {
            pool.clear();
            for (int t = 0; t < threads && next < values.size(); ++t, ++next)
                pool.emplace_back(run_case, next);
            for (auto& th : pool) th.join();
        }
    }

    CsvWriter csv(out_dir + "/sweep_summary.csv",
                  {"value", "phi0", "phi_final", "c_eff", "c_cap", "pass"});
    std::vector<PlotSeries> series;
    for (const SweepCase& c : sum.cases) {
        const TwinResult& r = c.result;
        csv.row({c.value, r.phi0, r.rows.back().phi, r.c_eff, r.c_cap, r.passed ? 1.0 : 0.0});
        sum.all_passed = sum.all_passed && r.passed;
        PlotSeries ps;
        char label[64];
        std::snprintf(label, sizeof label, "%s=%g", axis.c_str(), c.value);
        ps.name = label;
        for (const TwinRow& row : r.rows) {
            ps.x.push_back(row.t);
            ps.y.push_back(row.phi);
        }
        series.push_back(std::move(ps));
    }
    write_svg_plot(out_dir + "/sweep.svg", "Separation across the sweep", "t", "phi", series,
                   /*log_y=*/true);
    return sum;
}

} // namespace els
