#pragma once

// Command-line front end. Everything lives in this header so the test suite
// can drive commands in-process; main.cpp only forwards argv.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relaynet/relaynet.hpp"

namespace relaynet::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kNumericFailure = 2,
    kValidationFail = 3,
    kBoundary = 4,  // optimize: no interior optimum, p* = 1 reported
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

struct Options {
    // scenario
    double relay_x = 1.0;
    double theta = 1.0;
    double alpha = 4.0;
    double noise = 1.0;
    double power_s_db = 5.0;
    double power_r_db = 5.0;
    double power_x_db = 5.0;
    // MAC
    double density = 0.1;
    double p = 0.5;
    std::string mode = "both";
    // quadrature
    double rel_tol = 1e-6;
    double truncation_radius = 50.0;
    std::string sr_link = "printed";
    // sweep
    std::string var = "density";
    double start = 0.01;
    double stop = 0.5;
    int steps = 50;
    bool optimize_p = false;
    // optimizer
    std::string objective = "max_utility";
    double tol = 1e-8;
    double p_init = 0.5;
    int max_iters = 50;
    // simulation
    std::uint64_t seed = 1;
    std::size_t trials = 10'000;
    std::size_t slots = 10;
    double sim_radius = 50.0;
    std::string estimator = "semi";
    std::size_t slot_cap = 1'000'000;
    unsigned threads = 0;
    std::string iu_sampling = "independent";
    double theta_bias = 0.0;
    // output
    std::string format;
    std::string out;
    std::string config;
};

inline RelayScenario make_scenario(const Options& o) {
    RelayScenario s;
    s.source = {2.0, 0.0};
    s.relay = {o.relay_x, 0.0};
    s.destination = {0.0, 0.0};
    s.power_source = db_to_linear(o.power_s_db);
    s.power_relay = db_to_linear(o.power_r_db);
    s.power_interferer = db_to_linear(o.power_x_db);
    s.noise_psd = o.noise;
    s.path_loss_exp = o.alpha;
    s.sinr_threshold = o.theta;
    s.validate();
    return s;
}

inline std::vector<InterferenceMode> selected_modes(const std::string& m) {
    if (m == "ic")
        return {InterferenceMode::Correlated};
    if (m == "iu")
        return {InterferenceMode::Uncorrelated};
    return {InterferenceMode::Correlated, InterferenceMode::Uncorrelated};
}

inline QuadratureSpec make_quadrature(const Options& o) {
    QuadratureSpec q;
    q.rel_tol = o.rel_tol;
    q.truncation_radius = o.truncation_radius;
    q.validate();
    return q;
}

inline SrLinkFormula sr_formula(const Options& o) {
    return o.sr_link == "thinned" ? SrLinkFormula::AlohaThinned : SrLinkFormula::AsPrinted;
}

inline Objective objective_of(const Options& o) {
    return o.objective == "min_delay" ? Objective::MinDelay : Objective::MaxUtility;
}

inline SimConfig make_sim(const Options& o) {
    SimConfig s;
    s.sim_radius = o.sim_radius;
    s.trials = o.trials;
    s.slots_per_trial = o.slots;
    s.seed = o.seed;
    s.delay_estimator = o.estimator == "empirical" ? DelayEstimator::Empirical
                                                   : DelayEstimator::SemiAnalytic;
    s.empirical_slot_cap = o.slot_cap;
    s.threads = o.threads;
    s.uncorrelated_sampling = o.iu_sampling == "shared" ? UncorrelatedSampling::SharedField
                                                        : UncorrelatedSampling::IndependentFields;
    return s;
}

// --- formatting ---------------------------------------------------------------

inline std::string num(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline Json json_num(double v) { return std::isfinite(v) ? Json(v) : Json(num(v)); }

inline Json delay_json(const LocalDelay& d) {
    return d.is_infinite() ? Json("infinite") : json_num(d.slots());
}

/// A table rendered either as CSV (with a "# config:" header line) or as a
/// JSON document with the same rows.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Json>> rows;

    static std::string cell(const Json& v) {
        if (v.is_string())
            return v == "infinite" ? "inf" : v.get<std::string>();
        if (v.is_number_float())
            return num(v.get<double>());
        if (v.is_null())
            return "nan";
        return v.dump();
    }

    void write_csv(std::ostream& os, const Json& config) const {
        os << "# config: " << config.dump() << '\n';
        for (std::size_t i = 0; i < columns.size(); ++i)
            os << (i ? "," : "") << columns[i];
        os << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << cell(row[i]);
            os << '\n';
        }
    }

    Json to_json() const {
        Json arr = Json::array();
        for (const auto& row : rows) {
            Json obj = Json::object();
            for (std::size_t i = 0; i < columns.size(); ++i)
                obj[columns[i]] = row[i];
            arr.push_back(std::move(obj));
        }
        return arr;
    }
};

// --- commands -----------------------------------------------------------------

struct CommandResult {
    int code = kOk;
    Table table;
    Json extra = Json::object();  // command-specific fields for the JSON document
};

inline std::vector<Json> report_row(const MetricReport& r) {
    return {to_string(r.mode),   json_num(r.transmit_prob),   json_num(r.success_prob),
            delay_json(r.mean_local_delay), json_num(r.utility), json_num(r.link_success_sr),
            json_num(r.link_success_rd)};
}

inline CommandResult cmd_metrics(const Options& o) {
    const RelayScenario sc = make_scenario(o);
    const QuadratureSpec q = make_quadrature(o);
    CommandResult res;
    res.table.columns = {"mode", "p_used", "success_prob", "mean_local_delay", "utility",
                         "link_sr", "link_rd"};
    for (InterferenceMode mode : selected_modes(o.mode)) {
        MacModel mac{o.p, o.density, mode};
        mac.validate();
        res.table.rows.push_back(report_row(evaluate_metrics(sc, mac, q, sr_formula(o))));
    }
    return res;
}

inline std::vector<double> linspace(double start, double stop, int steps) {
    std::vector<double> v;
    for (int i = 0; i < steps; ++i)
        v.push_back(i == steps - 1 ? stop : start + (stop - start) * i / (steps - 1));
    return v;
}

inline CommandResult cmd_sweep(const Options& o) {
    if (!(o.start < o.stop))
        throw DomainError("sweep needs start < stop");
    if (o.steps < 2)
        throw DomainError("sweep needs at least 2 steps");
    if (o.optimize_p && o.var == "transmit_prob")
        throw DomainError("--optimize-p cannot be combined with a transmit_prob sweep");
    make_scenario(o);  // reject an invalid fixed scenario up front
    const QuadratureSpec q = make_quadrature(o);
    CommandResult res;
    res.table.columns = {"variable_value", "mode", "p_used", "success_prob", "mean_local_delay",
                         "utility", "link_sr", "link_rd", "status"};
    bool any_failed = false;
    for (double x : linspace(o.start, o.stop, o.steps)) {
        Options point = o;
        if (o.var == "relay_x")
            point.relay_x = x;
        else if (o.var == "density")
            point.density = x;
        else if (o.var == "transmit_prob")
            point.p = x;
        else
            point.theta = x;
        for (InterferenceMode mode : selected_modes(o.mode)) {
            std::vector<Json> row{json_num(x), to_string(mode)};
            std::string status = "ok";
            try {
                const RelayScenario sc = make_scenario(point);
                double p = point.p;
                if (o.optimize_p) {
                    OptimizerConfig oc;
                    oc.objective = objective_of(o);
                    oc.mode = mode;
                    oc.tol = o.tol;
                    oc.p_init = o.p_init;
                    oc.max_iters = o.max_iters;
                    const OptimizerTrace tr = optimize(oc, sc, point.density, q);
                    p = tr.p_star;
                    status = to_string(tr.status);
                }
                const MacModel mac{p, point.density, mode};
                mac.validate();
                const auto rep = evaluate_metrics(sc, mac, q, sr_formula(o));
                auto rest = report_row(rep);
                row.insert(row.end(), rest.begin() + 1, rest.end());
            } catch (const NonConvergenceError& e) {
                any_failed = true;
                status = std::string("failed: ") + e.what();
            } catch (const std::exception& e) {
                any_failed = true;
                status = std::string("error: ") + e.what();
            }
            while (row.size() < 8)
                row.push_back("nan");
            row.push_back(status);
            res.table.rows.push_back(std::move(row));
        }
    }
    res.code = any_failed ? kNumericFailure : kOk;
    return res;
}

inline Json iterate_json(const OptimizerIterate& it, bool with_flag) {
    Json j{{"p", json_num(it.p)}, {"residual", json_num(it.residual)}, {"slope", json_num(it.slope)}};
    if (with_flag)
        j["bisected"] = it.bisected;
    return j;
}

inline CommandResult cmd_optimize(const Options& o) {
    const RelayScenario sc = make_scenario(o);
    const QuadratureSpec q = make_quadrature(o);
    CommandResult res;
    res.table.columns = {"mode", "objective", "status", "p_star", "residual", "iterations",
                         "bisection_fallbacks", "note"};
    Json traces = Json::array();
    bool failed = false, boundary = false;
    for (InterferenceMode mode : selected_modes(o.mode)) {
        OptimizerConfig oc;
        oc.objective = objective_of(o);
        oc.mode = mode;
        oc.tol = o.tol;
        oc.p_init = o.p_init;
        oc.max_iters = o.max_iters;
        OptimizerTrace tr;
        try {
            tr = optimize(oc, sc, o.density, q);
        } catch (const NonConvergenceError& e) {
            tr = e.trace();
            tr.status = OptimizerStatus::Failed;
        }
        failed |= tr.status == OptimizerStatus::Failed;
        boundary |= tr.status == OptimizerStatus::Boundary;
        const double residual = tr.iterates.empty() ? std::nan("") : tr.iterates.back().residual;
        res.table.rows.push_back({to_string(mode), to_string(oc.objective), to_string(tr.status),
                                  json_num(tr.p_star), json_num(residual), tr.iterates.size(),
                                  tr.bisection_fallbacks, tr.note});
        Json t{{"mode", to_string(mode)}, {"scan", Json::array()}, {"iterates", Json::array()}};
        for (const auto& it : tr.scan)
            t["scan"].push_back(iterate_json(it, false));
        for (const auto& it : tr.iterates)
            t["iterates"].push_back(iterate_json(it, true));
        traces.push_back(std::move(t));
    }
    res.extra["traces"] = std::move(traces);
    res.code = failed ? kNumericFailure : boundary ? kBoundary : kOk;
    return res;
}

/// Analytic metrics against Monte Carlo estimates. A quantity passes when
/// |analytic - simulated| <= k * std_error (+ a rounding floor), k = 3 normally.
inline CommandResult cmd_validate(const Options& o) {
    const RelayScenario sc = make_scenario(o);
    RelayScenario biased = sc;
    biased.sinr_threshold = sc.sinr_threshold * (1.0 + o.theta_bias);
    biased.validate();
    const QuadratureSpec q = make_quadrature(o);
    const SimConfig sim = make_sim(o);
    sim.validate(sc);
    if (o.density > 0.0 && !(o.p < 1.0))
        throw DomainError("validate needs p < 1 when interferers are present (the delay diverges)");

    CommandResult res;
    Json warnings = Json::array();
    double k = 3.0;
    if (sim.trials < 1000) {
        k = 4.0;
        warnings.push_back("fewer than 1000 realizations: bands widened to 4 standard errors");
    }
    res.table.columns = {"mode", "quantity", "analytic", "simulated", "std_error", "band", "pass"};
    bool all_pass = true;
    for (InterferenceMode mode : selected_modes(o.mode)) {
        const MacModel mac{o.p, o.density, mode};
        mac.validate();
        const auto rep = evaluate_metrics(biased, mac, q, SrLinkFormula::AlohaThinned);
        const auto slots = estimate_slots(sc, mac, sim);
        const auto delay = estimate_delay(sc, mac, sim);
        auto add = [&](const char* name, double analytic, const SimEstimate& est) {
            const double band = k * est.std_error + 1e-9 * std::max(1.0, std::abs(analytic));
            const bool pass = std::abs(analytic - est.mean) <= band;
            all_pass &= pass;
            res.table.rows.push_back({to_string(mode), name, json_num(analytic), json_num(est.mean),
                                      json_num(est.std_error), json_num(band),
                                      pass ? "PASS" : "FAIL"});
        };
        add("success_prob", rep.success_prob, slots.end_to_end);
        add("mean_local_delay", rep.mean_local_delay.slots(), delay);
        add("link_sr", rep.link_success_sr, slots.link_sr);
        add("link_rd", rep.link_success_rd, slots.link_rd);
    }
    res.extra["warnings"] = std::move(warnings);
    res.extra["verdict"] = all_pass ? "PASS" : "FAIL";
    res.code = all_pass ? kOk : kValidationFail;
    return res;
}

inline CommandResult cmd_simulate(const Options& o) {
    const RelayScenario sc = make_scenario(o);
    const SimConfig sim = make_sim(o);
    sim.validate(sc);
    CommandResult res;
    res.table.columns = {"mode", "quantity", "mean", "std_error", "trials", "censored"};
    for (InterferenceMode mode : selected_modes(o.mode)) {
        const MacModel mac{o.p, o.density, mode};
        mac.validate();
        const auto slots = estimate_slots(sc, mac, sim);
        auto add = [&](const char* name, const SimEstimate& e) {
            res.table.rows.push_back({to_string(mode), name, json_num(e.mean),
                                      json_num(e.std_error), e.trials_used, e.censored});
        };
        add("success_prob", slots.end_to_end);
        if (o.density == 0.0 || o.p < 1.0)
            add("mean_local_delay", estimate_delay(sc, mac, sim));
        add("link_sr", slots.link_sr);
        add("link_rd", slots.link_rd);
    }
    return res;
}

// --- argument handling ------------------------------------------------------------

/// Options registered on one subcommand, with a way to echo their values.
class Registry {
public:
    explicit Registry(CLI::App* app) : app_(app) {}

    template <class T>
    CLI::Option* add(const std::string& name, T& ref, const std::string& help) {
        names_.push_back(name);
        echo_.emplace_back([name, &ref](Json& j) { j[name] = ref; });
        return app_->add_option("--" + name, ref, help);
    }

    CLI::Option* flag(const std::string& name, bool& ref, const std::string& help) {
        names_.push_back(name);
        flags_.push_back(name);
        echo_.emplace_back([name, &ref](Json& j) { j[name] = ref; });
        return app_->add_flag("--" + name, ref, help);
    }

    bool has(const std::string& name) const {
        return std::find(names_.begin(), names_.end(), name) != names_.end();
    }
    bool is_flag(const std::string& name) const {
        return std::find(flags_.begin(), flags_.end(), name) != flags_.end();
    }

    Json echo() const {
        Json j = Json::object();
        for (const auto& f : echo_)
            f(j);
        return j;
    }

private:
    CLI::App* app_;
    std::vector<std::string> names_;
    std::vector<std::string> flags_;
    std::vector<std::function<void(Json&)>> echo_;
};

struct Command {
    CLI::App* app;
    std::unique_ptr<Registry> reg;
    std::function<CommandResult(const Options&)> run;
    std::string default_format;
};

inline void add_scenario_options(Registry& r, Options& o) {
    r.add("relay-x", o.relay_x, "Relay x coordinate (source at (2,0), destination at the origin)");
    r.add("theta", o.theta, "SINR threshold (linear)")->check(CLI::PositiveNumber);
    r.add("alpha", o.alpha, "Path loss exponent (> 2)");
    r.add("noise", o.noise, "Noise power N0 (linear)")->check(CLI::NonNegativeNumber);
    r.add("power-s-db", o.power_s_db, "Source power [dB]");
    r.add("power-r-db", o.power_r_db, "Relay power [dB]");
    r.add("power-x-db", o.power_x_db, "Interferer power [dB]");
    r.add("mode", o.mode, "Interference mode")->check(CLI::IsMember({"ic", "iu", "both"}));
}

inline void add_quadrature_options(Registry& r, Options& o) {
    r.add("rel-tol", o.rel_tol, "Relative tolerance of the plane integrals");
    r.add("truncation-radius", o.truncation_radius, "Radius of the numerically integrated disk");
}

inline void add_sim_options(Registry& r, Options& o) {
    r.add("seed", o.seed, "Random seed");
    r.add("trials", o.trials, "Number of PPP realizations");
    r.add("slots", o.slots, "Slots simulated per realization");
    r.add("sim-radius", o.sim_radius, "Radius of the simulated disk");
    r.add("estimator", o.estimator, "Delay estimator")
        ->check(CLI::IsMember({"semi", "empirical"}));
    r.add("slot-cap", o.slot_cap, "Slot cap of the empirical delay estimator");
    r.add("threads", o.threads, "Worker threads (0: all cores)");
    r.add("iu-sampling", o.iu_sampling, "Uncorrelated-mode interferer sets")
        ->check(CLI::IsMember({"independent", "shared"}));
}

/// Splits "--name=value" and finds the value of --config, if any.
inline std::optional<std::string> find_config(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0)
            return args[i].substr(9);
    }
    return std::nullopt;
}

/// Turns a flat JSON config into flag tokens for one subcommand. Keys use the
/// flag names (dashes or underscores).
inline std::vector<std::string> config_tokens(const std::string& path, const Registry& reg,
                                              std::ostream& err) {
    std::ifstream in(path);
    if (!in)
        throw CLI::ValidationError("--config", "cannot open " + path);
    Json cfg;
    try {
        cfg = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw CLI::ValidationError("--config", std::string("invalid JSON: ") + e.what());
    }
    if (!cfg.is_object())
        throw CLI::ValidationError("--config", "the config file must hold a JSON object");
    std::vector<std::string> tokens;
    for (const auto& [key, value] : cfg.items()) {
        std::string name = key;
        std::replace(name.begin(), name.end(), '_', '-');
        if (name == "config" || !reg.has(name)) {
            err << "warning: ignoring config key '" << key << "'\n";
            continue;
        }
        if (reg.is_flag(name)) {
            tokens.push_back("--" + name + "=" + (value.get<bool>() ? "true" : "false"));
            continue;
        }
        tokens.push_back("--" + name);
        tokens.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
    return tokens;
}

inline void emit(const CommandResult& res, const std::string& command, const Json& config,
                 const std::string& format, std::ostream& os) {
    if (format == "csv") {
        res.table.write_csv(os, config);
        return;
    }
    Json doc{{"command", command}, {"config", config}};
    const bool tabular = command == "sweep" || command == "validate" || command == "simulate";
    doc[tabular ? "rows" : "results"] = res.table.to_json();
    for (const auto& [k, v] : res.extra.items())
        doc[k] = v;
    os << doc.dump(2) << '\n';
}

/// Entry point. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Relay network success, delay and utility under ALOHA and PPP interference",
                 "relaynet"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);

    std::map<std::string, Command> commands;
    auto make = [&](const std::string& name, const std::string& help, const std::string& fmt,
                    std::function<CommandResult(const Options&)> fn) -> Registry& {
        CLI::App* sub = app.add_subcommand(name, help);
        Command c{sub, std::make_unique<Registry>(sub), std::move(fn), fmt};
        Registry& r = *c.reg;
        add_scenario_options(r, o);
        sub->add_option("--config", o.config, "JSON file whose keys mirror the flags");
        sub->add_option("--out", o.out, "Write output to this file instead of stdout");
        sub->add_option("--format", o.format, "Output format")
            ->check(CLI::IsMember({"csv", "json"}));
        commands.emplace(name, std::move(c));
        return r;
    };

    {
        Registry& r = make("metrics", "Analytic measures at one parameter point", "json", cmd_metrics);
        r.add("density", o.density, "Interferer density")->check(CLI::NonNegativeNumber);
        r.add("p", o.p, "Transmit probability");
        r.add("sr-link", o.sr_link, "First-hop link formula")
            ->check(CLI::IsMember({"printed", "thinned"}));
        add_quadrature_options(r, o);
    }
    {
        Registry& r = make("sweep", "Analytic measures over a parameter range", "csv", cmd_sweep);
        r.add("density", o.density, "Interferer density")->check(CLI::NonNegativeNumber);
        r.add("p", o.p, "Transmit probability");
        r.add("var", o.var, "Swept variable")
            ->check(CLI::IsMember({"relay_x", "density", "transmit_prob", "sinr_threshold"}));
        r.add("start", o.start, "First value");
        r.add("stop", o.stop, "Last value");
        r.add("steps", o.steps, "Number of points (>= 2)");
        r.flag("optimize-p", o.optimize_p, "Use the optimal transmit probability at each point");
        r.add("objective", o.objective, "Objective for --optimize-p")
            ->check(CLI::IsMember({"min_delay", "max_utility"}));
        r.add("tol", o.tol, "Optimizer tolerance on the optimality condition");
        r.add("p-init", o.p_init, "Optimizer starting point");
        r.add("max-iters", o.max_iters, "Optimizer iteration limit");
        r.add("sr-link", o.sr_link, "First-hop link formula")
            ->check(CLI::IsMember({"printed", "thinned"}));
        add_quadrature_options(r, o);
    }
    {
        Registry& r = make("optimize", "Optimal transmit probability", "json", cmd_optimize);
        r.add("density", o.density, "Interferer density")->check(CLI::NonNegativeNumber);
        r.add("objective", o.objective, "Objective")
            ->check(CLI::IsMember({"min_delay", "max_utility"}));
        r.add("tol", o.tol, "Tolerance on the optimality condition");
        r.add("p-init", o.p_init, "Starting point");
        r.add("max-iters", o.max_iters, "Iteration limit");
        add_quadrature_options(r, o);
    }
    {
        Registry& r = make("validate", "Analytic measures against Monte Carlo", "json", cmd_validate);
        r.add("density", o.density, "Interferer density")->check(CLI::NonNegativeNumber);
        r.add("p", o.p, "Transmit probability");
        r.add("theta-bias", o.theta_bias,
              "Relative error injected into the analytic threshold (negative control)");
        add_sim_options(r, o);
        add_quadrature_options(r, o);
    }
    {
        Registry& r = make("simulate", "Monte Carlo estimates", "json", cmd_simulate);
        r.add("density", o.density, "Interferer density")->check(CLI::NonNegativeNumber);
        r.add("p", o.p, "Transmit probability");
        add_sim_options(r, o);
    }

    // Config values go first so that explicit flags (parsed later) win.
    std::vector<std::string> full = args;
    try {
        if (!args.empty() && commands.count(args[0])) {
            if (auto path = find_config(args)) {
                auto tokens = config_tokens(*path, *commands.at(args[0]).reg, err);
                full.insert(full.begin() + 1, tokens.begin(), tokens.end());
            }
        }
        std::vector<std::string> reversed(full.rbegin(), full.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    const Command& cmd = commands.at(name);
    const std::string format = o.format.empty() ? cmd.default_format : o.format;
    Json config = cmd.reg->echo();
    config["format"] = format;

    CommandResult res;
    try {
        res = cmd.run(o);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kNumericFailure;
    }

    if (o.out.empty()) {
        emit(res, name, config, format, out);
    } else {
        std::ofstream f(o.out);
        if (!f) {
            err << "error: cannot write " << o.out << '\n';
            return kUsage;
        }
        emit(res, name, config, format, f);
    }
    return res.code;
}

} // namespace relaynet::cli
