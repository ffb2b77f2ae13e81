#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "els/coeffs.hpp"
#include "els/diagnostics.hpp"
#include "els/dynamics.hpp"
#include "els/grid.hpp"
#include "els/initial_data.hpp"

namespace els {

struct OutputConfig {
    std::string out_dir;      ///< empty = resolved by the caller (flag, env, default)
    int report_every = 1;     ///< CSV row every k-th step
    int checkpoint_every = 0; ///< checkpoint every k-th step, 0 = final only
};

struct SweepConfig {
    std::string axis; ///< "epsilon" or "frank_delta"
    std::vector<double> values;
};

struct ExperimentConfig {
    std::string mode = "simulate"; ///< simulate | twin | identities | sweep
    double epsilon = 1e-3;
    PerturbationSpec perturbation;
    double c_cap = 0.0; ///< 0 = self-calibrated from the run
    SweepConfig sweep;
};

struct RunConfig {
    std::size_t n = 64;
    double length = 2.0 * M_PI;
    LeslieCoefficients leslie;
    FrankConstants frank;
    double c0_abs = 1.0;
    SolverConfig solver;
    InitialDataConfig initial;
    OutputConfig outputs;
    ExperimentConfig experiment;

    Grid grid() const { return Grid::make(n, length); }
};

namespace cfgdetail {

using nlohmann::json;

struct Issues {
    std::vector<std::string> list;
    void add(const std::string& path, const std::string& what) {
        list.push_back(path + ": " + what);
    }
};

inline const json* child(const json& j, const std::string& key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

inline double num(const json& j, const std::string& path, const std::string& key, double fallback,
                  Issues& iss) {
    const json* c = child(j, key);
    if (!c) return fallback;
    if (!c->is_number()) {
        iss.add(path + "." + key, "expected a number");
        return fallback;
    }
    return c->get<double>();
}

inline double required_num(const json& j, const std::string& path, const std::string& key,
                           Issues& iss) {
    const json* c = child(j, key);
    if (!c || !c->is_number()) {
        iss.add(path + "." + key, "required number missing");
        return 0.0;
    }
    return c->get<double>();
}

inline long integer(const json& j, const std::string& path, const std::string& key, long fallback,
                    Issues& iss) {
    const json* c = child(j, key);
    if (!c) return fallback;
    if (!c->is_number_integer()) {
        iss.add(path + "." + key, "expected an integer");
        return fallback;
    }
    return c->get<long>();
}

inline bool boolean(const json& j, const std::string& path, const std::string& key, bool fallback,
                    Issues& iss) {
    const json* c = child(j, key);
    if (!c) return fallback;
    if (!c->is_boolean()) {
        iss.add(path + "." + key, "expected a boolean");
        return fallback;
    }
    return c->get<bool>();
}

inline std::string text(const json& j, const std::string& path, const std::string& key,
                        const std::string& fallback, Issues& iss) {
    const json* c = child(j, key);
    if (!c) return fallback;
    if (!c->is_string()) {
        iss.add(path + "." + key, "expected a string");
        return fallback;
    }
    return c->get<std::string>();
}

/// Most specific config path a failed coefficient constraint points at.
inline std::string constraint_path(const std::string& name) {
    static const std::pair<const char*, const char*> table[] = {
        {"lambda1 = mu2 - mu3", "coefficients.leslie.lambda1"},
        {"lambda2 = mu5 - mu6", "coefficients.leslie.lambda2"},
        {"mu2 + mu3 = mu6 - mu5", "coefficients.leslie"},
        {"lambda1 < 0", "coefficients.leslie.lambda1"},
        {"mu4 > 0", "coefficients.leslie.mu4"},
        {"mu1 - lambda2^2/lambda1 >= 0", "coefficients.leslie.mu1"},
        {"mu5 + mu6 >= -lambda2^2/lambda1", "coefficients.leslie"},
        {"k1 > 0", "coefficients.frank.k1"},
        {"k2 > 0", "coefficients.frank.k2"},
        {"k3 > 0", "coefficients.frank.k3"},
    };
    for (const auto& [key, path] : table)
        if (name == key) return path;
    return "coefficients";
}

} // namespace cfgdetail

/// Parse and validate a config object. Collects every problem it can find and
/// throws a single ValidationError listing all of them, so a bad config is
/// fixable in one round trip.
inline RunConfig parse_config(const nlohmann::json& root) {
    using namespace cfgdetail;
    Issues iss;
    RunConfig cfg;

    if (!root.is_object()) {
        throw ValidationError("config: top level must be a JSON object");
    }

    if (const json* g = child(root, "grid"); g && g->is_object()) {
        const long n = integer(*g, "grid", "n", 64, iss);
        cfg.length = num(*g, "grid", "length", cfg.length, iss);
        if (n < 8 || (n & (n - 1)) != 0)
            iss.add("grid.n", "must be a power of two >= 8");
        else
            cfg.n = static_cast<std::size_t>(n);
        if (!(cfg.length > 0.0)) iss.add("grid.length", "must be positive");
    } else {
        iss.add("grid", "required object missing");
    }

    const std::size_t issues_before_coeffs = iss.list.size();
    if (const json* c = child(root, "coefficients"); c && c->is_object()) {
        if (const json* le = child(*c, "leslie"); le && le->is_object()) {
            cfg.leslie.mu1 = required_num(*le, "coefficients.leslie", "mu1", iss);
            cfg.leslie.mu2 = required_num(*le, "coefficients.leslie", "mu2", iss);
            cfg.leslie.mu3 = required_num(*le, "coefficients.leslie", "mu3", iss);
            cfg.leslie.mu4 = required_num(*le, "coefficients.leslie", "mu4", iss);
            cfg.leslie.mu5 = required_num(*le, "coefficients.leslie", "mu5", iss);
            cfg.leslie.mu6 = required_num(*le, "coefficients.leslie", "mu6", iss);
            cfg.leslie.lambda1 = required_num(*le, "coefficients.leslie", "lambda1", iss);
            cfg.leslie.lambda2 = required_num(*le, "coefficients.leslie", "lambda2", iss);
        } else {
            iss.add("coefficients.leslie", "required object missing");
        }
        if (const json* fr = child(*c, "frank"); fr && fr->is_object()) {
            cfg.frank.k1 = required_num(*fr, "coefficients.frank", "k1", iss);
            cfg.frank.k2 = required_num(*fr, "coefficients.frank", "k2", iss);
            cfg.frank.k3 = required_num(*fr, "coefficients.frank", "k3", iss);
        } else {
            iss.add("coefficients.frank", "required object missing");
        }
        cfg.c0_abs = num(*c, "coefficients", "c0_abs", 1.0, iss);
        if (!(cfg.c0_abs > 0.0)) iss.add("coefficients.c0_abs", "must be positive");
    } else {
        iss.add("coefficients", "required object missing");
    }

    if (iss.list.size() == issues_before_coeffs) {
        const ValidationReport rep = validate(cfg.leslie, cfg.frank);
        if (!rep.ok)
            for (const auto& chk : rep.checks)
                if (!chk.ok) iss.add(constraint_path(chk.name), "constraint failed: " + chk.name);
    }

    if (const json* s = child(root, "solver"); s && s->is_object()) {
        cfg.solver.dt = num(*s, "solver", "dt", cfg.solver.dt, iss);
        cfg.solver.t_end = num(*s, "solver", "t_end", cfg.solver.t_end, iss);
        cfg.solver.imex_theta = num(*s, "solver", "imex_theta", cfg.solver.imex_theta, iss);
        cfg.solver.order = static_cast<int>(integer(*s, "solver", "order", cfg.solver.order, iss));
        cfg.solver.renormalize_every = static_cast<int>(
            integer(*s, "solver", "renormalize_every", cfg.solver.renormalize_every, iss));
        cfg.solver.dealias = boolean(*s, "solver", "dealias", cfg.solver.dealias, iss);
        cfg.solver.cfl_safety = num(*s, "solver", "cfl_safety", cfg.solver.cfl_safety, iss);
        if (!(cfg.solver.dt > 0.0)) iss.add("solver.dt", "must be positive");
        if (!(cfg.solver.t_end >= 0.0)) iss.add("solver.t_end", "must be non-negative");
        if (!(cfg.solver.imex_theta >= 0.5 && cfg.solver.imex_theta <= 1.0))
            iss.add("solver.imex_theta", "must lie in [0.5, 1]");
        if (cfg.solver.order != 1 && cfg.solver.order != 2)
            iss.add("solver.order", "must be 1 or 2");
        if (cfg.solver.renormalize_every < 1)
            iss.add("solver.renormalize_every", "must be >= 1");
        if (!(cfg.solver.cfl_safety > 0.0 && cfg.solver.cfl_safety <= 1.0))
            iss.add("solver.cfl_safety", "must lie in (0, 1]");
    }

    if (const json* i = child(root, "initial_data"); i && i->is_object()) {
        cfg.initial.generator = text(*i, "initial_data", "generator", cfg.initial.generator, iss);
        cfg.initial.amplitude = num(*i, "initial_data", "amplitude", cfg.initial.amplitude, iss);
        cfg.initial.cutoff =
            static_cast<int>(integer(*i, "initial_data", "cutoff", cfg.initial.cutoff, iss));
        cfg.initial.seed = static_cast<std::uint64_t>(
            integer(*i, "initial_data", "seed", static_cast<long>(cfg.initial.seed), iss));
        if (const json* dir = child(*i, "direction")) {
            if (dir->is_array() && dir->size() == 3 && (*dir)[0].is_number() &&
                (*dir)[1].is_number() && (*dir)[2].is_number())
                cfg.initial.direction = {(*dir)[0].get<double>(), (*dir)[1].get<double>(),
                                         (*dir)[2].get<double>()};
            else
                iss.add("initial_data.direction", "expected an array of 3 numbers");
        }
        static const char* known[] = {"constant_director", "twist_profile", "random_smooth",
                                      "taylor_green"};
        bool ok = false;
        for (const char* name : known) ok = ok || cfg.initial.generator == name;
        if (!ok) iss.add("initial_data.generator", "unknown generator '" + cfg.initial.generator + "'");
        if (!(cfg.initial.amplitude >= 0.0)) iss.add("initial_data.amplitude", "must be >= 0");
        if (cfg.initial.cutoff < 1) iss.add("initial_data.cutoff", "must be >= 1");
    }

    if (const json* o = child(root, "outputs"); o && o->is_object()) {
        cfg.outputs.out_dir = text(*o, "outputs", "out_dir", cfg.outputs.out_dir, iss);
        cfg.outputs.report_every =
            static_cast<int>(integer(*o, "outputs", "report_every", cfg.outputs.report_every, iss));
        cfg.outputs.checkpoint_every = static_cast<int>(
            integer(*o, "outputs", "checkpoint_every", cfg.outputs.checkpoint_every, iss));
        if (cfg.outputs.report_every < 1) iss.add("outputs.report_every", "must be >= 1");
        if (cfg.outputs.checkpoint_every < 0) iss.add("outputs.checkpoint_every", "must be >= 0");
    }

    if (const json* e = child(root, "experiment"); e && e->is_object()) {
        cfg.experiment.mode = text(*e, "experiment", "mode", cfg.experiment.mode, iss);
        cfg.experiment.epsilon = num(*e, "experiment", "epsilon", cfg.experiment.epsilon, iss);
        cfg.experiment.c_cap = num(*e, "experiment", "c_cap", cfg.experiment.c_cap, iss);
        if (const json* p = child(*e, "perturbation"); p && p->is_object()) {
            cfg.experiment.perturbation.target =
                text(*p, "experiment.perturbation", "target",
                     cfg.experiment.perturbation.target, iss);
            cfg.experiment.perturbation.cutoff = static_cast<int>(integer(
                *p, "experiment.perturbation", "cutoff", cfg.experiment.perturbation.cutoff, iss));
            cfg.experiment.perturbation.seed = static_cast<std::uint64_t>(
                integer(*p, "experiment.perturbation", "seed",
                        static_cast<long>(cfg.experiment.perturbation.seed), iss));
        }
        if (const json* sw = child(*e, "sweep"); sw && sw->is_object()) {
            cfg.experiment.sweep.axis = text(*sw, "experiment.sweep", "axis", "", iss);
            if (const json* v = child(*sw, "values"); v && v->is_array()) {
                for (const auto& x : *v) {
                    if (x.is_number())
                        cfg.experiment.sweep.values.push_back(x.get<double>());
                    else
                        iss.add("experiment.sweep.values", "expected numbers");
                }
            }
        }
        static const char* modes[] = {"simulate", "twin", "identities", "sweep"};
        bool ok = false;
        for (const char* m : modes) ok = ok || cfg.experiment.mode == m;
        if (!ok) iss.add("experiment.mode", "unknown mode '" + cfg.experiment.mode + "'");
        const std::string& tgt = cfg.experiment.perturbation.target;
        if (tgt != "director" && tgt != "velocity" && tgt != "both")
            iss.add("experiment.perturbation.target", "must be director, velocity, or both");
        if (!(cfg.experiment.epsilon >= 0.0)) iss.add("experiment.epsilon", "must be >= 0");
        if (cfg.experiment.mode == "sweep") {
            const std::string& ax = cfg.experiment.sweep.axis;
            if (ax != "epsilon" && ax != "frank_delta")
                iss.add("experiment.sweep.axis", "must be epsilon or frank_delta");
            if (cfg.experiment.sweep.values.empty())
                iss.add("experiment.sweep.values", "must be a non-empty array");
        }
    }

    if (!iss.list.empty()) {
        std::string msg = "config validation failed:";
        for (const auto& s : iss.list) msg += "\n  " + s;
        throw ValidationError(msg);
    }
    cfg.experiment.perturbation.epsilon = cfg.experiment.epsilon;
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("config: cannot open '" + path + "'");
    nlohmann::json root;
    try {
        f >> root;
    } catch (const std::exception& e) {
        throw ParseError("config: invalid JSON in '" + path + "': " + e.what());
    }
    return parse_config(root);
}

/// The config with every default filled in, as written into run directories.
inline nlohmann::json resolved_config_json(const RunConfig& c) {
    nlohmann::json j;
    j["grid"] = {{"n", c.n}, {"length", c.length}};
    j["coefficients"] = {
        {"leslie",
         {{"mu1", c.leslie.mu1},
          {"mu2", c.leslie.mu2},
          {"mu3", c.leslie.mu3},
          {"mu4", c.leslie.mu4},
          {"mu5", c.leslie.mu5},
          {"mu6", c.leslie.mu6},
          {"lambda1", c.leslie.lambda1},
          {"lambda2", c.leslie.lambda2}}},
        {"frank", {{"k1", c.frank.k1}, {"k2", c.frank.k2}, {"k3", c.frank.k3}}},
        {"c0_abs", c.c0_abs}};
    j["solver"] = {{"dt", c.solver.dt},
                   {"t_end", c.solver.t_end},
                   {"imex_theta", c.solver.imex_theta},
                   {"order", c.solver.order},
                   {"renormalize_every", c.solver.renormalize_every},
                   {"dealias", c.solver.dealias},
                   {"cfl_safety", c.solver.cfl_safety}};
    j["initial_data"] = {{"generator", c.initial.generator},
                         {"amplitude", c.initial.amplitude},
                         {"cutoff", c.initial.cutoff},
                         {"seed", c.initial.seed},
                         {"direction", c.initial.direction}};
    j["outputs"] = {{"out_dir", c.outputs.out_dir},
                    {"report_every", c.outputs.report_every},
                    {"checkpoint_every", c.outputs.checkpoint_every}};
    j["experiment"] = {{"mode", c.experiment.mode},
                       {"epsilon", c.experiment.epsilon},
                       {"c_cap", c.experiment.c_cap},
                       {"perturbation",
                        {{"target", c.experiment.perturbation.target},
                         {"cutoff", c.experiment.perturbation.cutoff},
                         {"seed", c.experiment.perturbation.seed}}}};
    if (!c.experiment.sweep.axis.empty())
        j["experiment"]["sweep"] = {{"axis", c.experiment.sweep.axis},
                                    {"values", c.experiment.sweep.values}};
    return j;
}

} // namespace els
