// Command-line front end for the nematic hydrodynamics library.
//
//   els validate   --config c.json            check coefficients, print derived constants
//   els simulate   --config c.json [--out d]  evolve and record the energy series
//   els twin       --config c.json [--out d]  base/perturbed pair vs. exponential bound
//   els identities --config c.json [--out d]  algebraic identity suite on the initial state
//   els sweep      --config c.json [--out d]  one twin run per sweep value
//   els plot       --out d                    regenerate SVG plots from a run directory
//
// Exit codes: 0 success, 1 a check failed or the run blew up, 2 bad config.

#include <cstdlib>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include <els/els.hpp>

namespace {

std::string resolve_out_dir(const std::string& flag, const std::string& cfg_dir,
                            const std::string& mode) {
    if (!flag.empty()) return flag;
    if (!cfg_dir.empty()) return cfg_dir;
    if (const char* env = std::getenv("ELS_OUT_DIR"); env && *env)
        return std::string(env) + "/" + mode;
    return "runs/" + mode;
}

void apply_overrides(els::RunConfig& cfg, const CLI::App* cmd, long seed, double epsilon) {
    if (cmd->count("--seed")) cfg.initial.seed = static_cast<std::uint64_t>(seed);
    if (cmd->count("--epsilon")) {
        cfg.experiment.epsilon = epsilon;
        cfg.experiment.perturbation.epsilon = epsilon;
    }
}

int cmd_validate(const els::RunConfig& cfg) {
    const auto report = els::validate(cfg.leslie, cfg.frank);
    std::printf("%s", report.summary().c_str());
    const auto derived = els::DerivedConstants::from(cfg.leslie, cfg.frank);
    std::printf("derived: a=%.6g alpha=%.6g beta=%.6g mu_floor=%.6g gamma=%.6g c0_lower=%.6g\n",
                derived.a, derived.alpha, derived.beta, derived.mu_floor, derived.gamma,
                derived.c0_lower);
    std::printf("delta0(c0_abs=%.3g) = %.6g\n", cfg.c0_abs,
                els::delta0(cfg.leslie, cfg.frank, cfg.c0_abs));
    return 0;
}

int cmd_simulate(const els::RunConfig& cfg, const std::string& out) {
    const auto sum = els::run_simulation(cfg, out);
    const auto& last = sum.rows.back();
    std::printf("simulate: %zu steps to t=%.6g in %s\n", sum.rows.size() - 1, last.t, out.c_str());
    std::printf("  E_total %.9g -> %.9g\n", sum.rows.front().e_kin + sum.rows.front().e_elastic,
                last.e_kin + last.e_elastic);
    std::printf("  max |energy residual| %.3e, max drift %.3e, max |div u| %.3e\n",
                sum.max_abs_residual, sum.max_drift, sum.max_div);
    return 0;
}

int cmd_twin(const els::RunConfig& cfg, const std::string& out) {
    const auto res = els::run_twin(cfg, out);
    std::printf("twin: %zu rows in %s\n", res.rows.size(), out.c_str());
    std::printf("  phi0 %.6e, phi(T) %.6e, c_eff %.4g, c_cap %.4g\n", res.phi0,
                res.rows.back().phi, res.c_eff, res.c_cap);
    std::printf("  bound %s\n", res.passed ? "HELD" : "VIOLATED");
    return res.passed ? 0 : 1;
}

int cmd_identities(const els::RunConfig& cfg, const std::string& out) {
    const auto rep = els::run_identities(cfg, out);
    for (const auto& r : rep.rows)
        std::printf("  %-28s %11.3e  (tol %.1e)  %s\n", r.id.c_str(), r.residual, r.tolerance,
                    r.pass ? "ok" : "FAIL");
    std::printf("identities: %s, worst relative residual %.3e, report in %s\n",
                rep.all_pass ? "all pass" : "FAILURES", rep.worst_identity, out.c_str());
    return rep.all_pass ? 0 : 1;
}

int cmd_sweep(const els::RunConfig& cfg, const std::string& out, int threads) {
    const auto sum = els::run_sweep(cfg, out, threads);
    for (const auto& c : sum.cases)
        std::printf("  %s=%-10g phi0 %.3e  phi(T) %.3e  c_eff %.4g  %s\n", sum.axis.c_str(),
                    c.value, c.result.phi0, c.result.rows.back().phi, c.result.c_eff,
                    c.result.passed ? "ok" : "FAIL");
    std::printf("sweep: %zu cases in %s, %s\n", sum.cases.size(), out.c_str(),
                sum.all_passed ? "all bounds held" : "BOUND VIOLATED");
    return sum.all_passed ? 0 : 1;
}

int cmd_plot(const std::string& dir) {
    namespace fs = std::filesystem;
    bool did = false;
    if (fs::exists(dir + "/series.csv")) {
        const auto tab = els::read_csv(dir + "/series.csv");
        std::vector<els::PlotSeries> series(3);
        series[0].name = "E_kin";
        series[1].name = "E_elastic";
        series[2].name = "E_total";
        const int ct = tab.column("t");
        const int cek = tab.column("E_kin");
        const int cee = tab.column("E_elastic");
        const int cet = tab.column("E_total");
        for (const auto& row : tab.rows) {
            series[0].x.push_back(row[ct]);
            series[0].y.push_back(row[cek]);
            series[1].x.push_back(row[ct]);
            series[1].y.push_back(row[cee]);
            series[2].x.push_back(row[ct]);
            series[2].y.push_back(row[cet]);
        }
        els::write_svg_plot(dir + "/energy.svg", "Energy decay", "t", "energy", series);
        did = true;
    }
    if (fs::exists(dir + "/twin_series.csv")) {
        const auto tab = els::read_csv(dir + "/twin_series.csv");
        std::vector<els::PlotSeries> series(2);
        series[0].name = "phi";
        series[1].name = "bound";
        const int ct = tab.column("t");
        const int cphi = tab.column("phi");
        const int cbound = tab.column("gronwall_bound");
        for (const auto& row : tab.rows) {
            series[0].x.push_back(row[ct]);
            series[0].y.push_back(row[cphi]);
            series[1].x.push_back(row[ct]);
            series[1].y.push_back(row[cbound]);
        }
        els::write_svg_plot(dir + "/twin.svg", "Separation vs. exponential bound", "t", "phi",
                            series, /*log_y=*/true);
        did = true;
    }
    if (!did) {
        std::fprintf(stderr, "plot: no series.csv or twin_series.csv in '%s'\n", dir.c_str());
        return 1;
    }
    std::printf("plot: refreshed SVG plots in %s\n", dir.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D periodic nematic liquid-crystal flow: solver and verification harness"};
    app.require_subcommand(1);

    std::string config_path, out_flag;
    long seed = 0;
    double epsilon = 0.0;
    int threads = 1;

    auto add_common = [&](CLI::App* cmd, bool with_out) {
        cmd->add_option("--config", config_path, "JSON configuration file")->required();
        if (with_out) cmd->add_option("--out", out_flag, "output directory");
        cmd->add_option("--seed", seed, "override initial-data seed");
        cmd->add_option("--epsilon", epsilon, "override perturbation size");
        return cmd;
    };

    auto* validate = add_common(app.add_subcommand("validate", "check the configuration"), false);
    auto* simulate = add_common(app.add_subcommand("simulate", "run the solver"), true);
    auto* twin = add_common(app.add_subcommand("twin", "base/perturbed comparison run"), true);
    auto* identities =
        add_common(app.add_subcommand("identities", "algebraic identity suite"), true);
    auto* sweep = add_common(app.add_subcommand("sweep", "twin runs across a parameter axis"), true);
    sweep->add_option("--threads", threads, "cases run in parallel");
    auto* plot = app.add_subcommand("plot", "regenerate plots from a run directory");
    std::string plot_dir;
    plot->add_option("--out", plot_dir, "run directory to plot")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(plot)) return cmd_plot(plot_dir);

        els::RunConfig cfg = els::load_config(config_path);
        const CLI::App* active = app.get_subcommands().front();
        apply_overrides(cfg, active, seed, epsilon);

        if (app.got_subcommand(validate)) return cmd_validate(cfg);
        if (app.got_subcommand(simulate))
            return cmd_simulate(cfg, resolve_out_dir(out_flag, cfg.outputs.out_dir, "simulate"));
        if (app.got_subcommand(twin))
            return cmd_twin(cfg, resolve_out_dir(out_flag, cfg.outputs.out_dir, "twin"));
        if (app.got_subcommand(identities))
            return cmd_identities(cfg,
                                  resolve_out_dir(out_flag, cfg.outputs.out_dir, "identities"));
        if (app.got_subcommand(sweep))
            return cmd_sweep(cfg, resolve_out_dir(out_flag, cfg.outputs.out_dir, "sweep"),
                             threads);
    } catch (const els::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const els::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const els::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
