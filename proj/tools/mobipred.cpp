// Command-line front end: trace generation, training, prediction, link
// expiration, routing comparison and the evaluation pipelines. Exit codes:
// 0 success, 1 runtime error, 2 argument error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mobipred/io.hpp"
#include "mobipred/log.hpp"
#include "mobipred/mobility.hpp"
#include "mobipred/pipeline.hpp"
#include "mobipred/predictor.hpp"
#include "mobipred/rng.hpp"
#include "mobipred/routing.hpp"
#include "mobipred/stability.hpp"

namespace fs = std::filesystem;
using namespace mobipred;

namespace {

// Values from --config; command-line flags take precedence.
struct ConfigFile {
    nlohmann::json j;

    void load(const std::string& path) {
        j = nlohmann::json::parse(read_file(path));
        if (!j.is_object()) {
            throw std::runtime_error("config file must hold a JSON object");
        }
    }

    template <typename T>
    void layer(const CLI::Option* opt, T& value, const std::string& key) const {
        if (opt->count() == 0 && j.is_object() && j.contains(key)) {
            value = j.at(key).get<T>();
        }
    }
};

Territory parse_territory(const std::string& spec) {
    // "WxH" or "WxHxD"
    std::vector<double> dims;
    std::string token;
    std::istringstream ss(spec);
    while (std::getline(ss, token, 'x')) {
        dims.push_back(parse_double(token));
    }
    if (dims.size() != 2 && dims.size() != 3) {
        throw CLI::ValidationError("--territory", "expected WxH or WxHxD");
    }
    Territory t;
    t.x_min = 0.0;
    t.x_max = dims[0];
    t.y_min = 0.0;
    t.y_max = dims[1];
    if (dims.size() == 3) {
        t.z_min = 0.0;
        t.z_max = dims[2];
    }
    return t;
}

std::vector<Policy> parse_policies(const std::string& spec) {
    std::vector<Policy> policies;
    std::string token;
    std::istringstream ss(spec);
    while (std::getline(ss, token, ',')) {
        const auto p = policy_from_string(token);
        if (!p) {
            throw CLI::ValidationError("--policies", "unknown policy '" + token + "'");
        }
        policies.push_back(*p);
    }
    if (policies.empty()) {
        throw CLI::ValidationError("--policies", "at least one policy required");
    }
    return policies;
}

std::size_t sample_index(const LocationSeries& series, double time) {
    const double pos = (time - series.start_time) / series.sample_interval;
    const auto idx = static_cast<long long>(pos + 0.5);
    if (idx < 0 || static_cast<std::size_t>(idx) >= series.size() ||
        std::abs(series.time_at(static_cast<std::size_t>(idx)) - time) > 1e-6) {
        throw std::runtime_error("no sample at t=" + format_double(time));
    }
    return static_cast<std::size_t>(idx);
}

// ---------------------------------------------------------------- gen-trace

struct GenTraceArgs {
    std::uint64_t seed = 1;
    double v_min = 0.0, v_max = 20.0, pause_max = 60.0;
    double duration = 4000.0, interval = 10.0, start = 0.0;
    std::string territory = "1000x1000";
    int nodes = 1;
    std::string out;
};

void run_gen_trace(const GenTraceArgs& a) {
    RwmParams params;
    params.territory = parse_territory(a.territory);
    params.v_min = a.v_min;
    params.v_max = a.v_max;
    params.pause_max = a.pause_max;
    params.duration = a.duration;

    const auto count = static_cast<std::size_t>(a.duration / a.interval) + 1;
    std::vector<LocationSeries> series;
    for (int n = 0; n < a.nodes; ++n) {
        params.rng_seed = derive_seed(a.seed, "trace/" + std::to_string(n));
        const ContinuousTrace trace = generate_rwm_trace(params);
        series.push_back(
            sample_trace(trace, a.interval, a.start, count, "n" + std::to_string(n)));
    }
    write_trace_csv(a.out, series);
    info("wrote " + std::to_string(series.size()) + " series x " + std::to_string(count) +
         " samples to " + a.out);
}

// -------------------------------------------------------------------- train

struct TrainArgs {
    std::string trace;
    std::string node = "n0";
    std::string coord = "x";
    int n_input = 8, n_hidden = 5, horizon = 3, epochs = 500;
    double learning_rate = 0.05;
    std::size_t split = 200;
    std::uint64_t seed = 1;
    std::string out;
    std::string curve;
};

NetConfig make_net_config(int ne, int nc, int horizon, int epochs, double lr) {
    NetConfig cfg;
    cfg.n_input = ne;
    cfg.n_hidden = nc;
    cfg.horizon = horizon;
    cfg.epochs = epochs;
    cfg.learning_rate = lr;
    cfg.n_feedback = default_feedback(horizon, ne);
    return cfg;
}

void run_train(const TrainArgs& a) {
    const LocationSeries series = read_series(a.trace, a.node);
    const std::vector<double>& raw = series.coord(a.coord[0]);

    NetConfig cfg = make_net_config(a.n_input, a.n_hidden, a.horizon, a.epochs, a.learning_rate);
    cfg.rng_seed = derive_seed(a.seed, "model/" + a.node + "/" + a.coord);

    const std::size_t split = (a.split == 0 || a.split > raw.size()) ? raw.size() : a.split;
    if (!a.curve.empty()) {
        std::vector<double> gener;
        const TrainOutcome out = train_with_curves(raw, cfg, split, &gener);
        write_error_curve_csv(a.curve, out.epoch_error, gener);
        save_model(a.out, out.model, a.node, a.coord);
        if (out.eval) {
            std::cout << "E_train=" << format_double(out.eval->e_train)
                      << " E_gener=" << format_double(out.eval->e_gener) << '\n';
        }
        return;
    }
    const TrainOutcome out = train_model(raw, cfg, split);
    save_model(a.out, out.model, a.node, a.coord);
    if (out.eval) {
        std::cout << "E_train=" << format_double(out.eval->e_train)
                  << " E_gener=" << format_double(out.eval->e_gener) << '\n';
    } else if (!out.epoch_error.empty()) {
        std::cout << "E_train=" << format_double(out.epoch_error.back()) << '\n';
    }
}

// ------------------------------------------------------------------ predict

struct PredictArgs {
    std::string model;
    std::string trace;
    std::string node;
    std::string coord;
    double at = 0.0;
    int steps = 0;
};

void run_predict(const PredictArgs& a) {
    std::string meta_node, meta_coord;
    const CoordinateModel model = load_model(a.model, &meta_node, &meta_coord);
    const std::string node = a.node.empty() ? meta_node : a.node;
    const std::string coord = a.coord.empty() ? meta_coord : a.coord;
    if (node.empty() || coord.empty()) {
        throw std::runtime_error("model carries no node/coord metadata; pass --node and --coord");
    }

    const LocationSeries series = read_series(a.trace, node);
    const std::size_t at_index = sample_index(series, a.at);
    const int steps = a.steps > 0 ? a.steps : model.net.config().horizon;
    const std::vector<double>& raw = series.coord(coord[0]);

    const int n_input = model.net.config().n_input;
    if (at_index + 1 < static_cast<std::size_t>(n_input)) {
        throw std::runtime_error("not enough history before t=" + format_double(a.at));
    }
    std::vector<double> history(raw.begin() + (at_index + 1 - n_input),
                                raw.begin() + at_index + 1);
    std::size_t clamped = 0;
    for (double& v : history) {
        v = model.scaler.scale_clamped(v, &clamped);
    }
    const Prediction pred = predict_multi_step(model.net, history, steps);

    std::cout << "step,time,predicted\n";
    for (int k = 0; k < steps; ++k) {
        const double t = series.time_at(at_index) + (k + 1) * series.sample_interval;
        std::cout << (k + 1) << ',' << format_double(t) << ','
                  << format_double(model.scaler.unscale(pred.outputs[k])) << '\n';
    }
}

// ---------------------------------------------------------------------- let

struct LetArgs {
    std::string model_a;
    std::string model_b;
    std::string trace;
    std::string node_a;
    std::string node_b;
    double at = 0.0;
    double range = 250.0;
    int steps = 3;
};

void run_let(const LetArgs& a) {
    std::string node_a = a.node_a, node_b = a.node_b, coord;
    const NodeModel ma = load_node_model(a.model_a);
    const NodeModel mb = load_node_model(a.model_b);
    if (node_a.empty() || node_b.empty()) {
        // fall back to the metadata stored with the x-coordinate models
        load_model(a.model_a + "_x.json", node_a.empty() ? &node_a : nullptr, &coord);
        load_model(a.model_b + "_x.json", node_b.empty() ? &node_b : nullptr, &coord);
    }
    if (node_a.empty() || node_b.empty()) {
        throw std::runtime_error("models carry no node metadata; pass --node-a and --node-b");
    }

    const LocationSeries sa = read_series(a.trace, node_a);
    const LocationSeries sb = read_series(a.trace, node_b);
    const std::size_t at_index = sample_index(sa, a.at);
    const ExpirationTime let =
        predicted_let(ma, mb, sa, sb, at_index, a.range, a.steps);
    std::cout << to_string(let) << '\n';
}

// ---------------------------------------------------------------- route-sim

struct RouteSimArgs {
    std::string scenario;
    bool fig2 = false;
    std::string models;
    double range = 0.0;  // 0: use the scenario's range
    int horizon = 3;
    std::string policies = "stable,shortest";
    int max_hops = 0;
    int epochs = 400;
    double learning_rate = 0.25;
    std::uint64_t seed = 1;
    std::string out;
};

void run_route_sim(const RouteSimArgs& a) {
    Scenario scenario;
    std::map<std::string, ContinuousTrace> truth;
    if (a.fig2) {
        scenario = build_fig2_scenario();
        truth = fig2_truth();
    } else {
        scenario = load_scenario(a.scenario);
        for (const auto& [id, series] : scenario.nodes) {
            truth.emplace(id, series_to_trace(series));
        }
    }

    ModelSet models;
    if (!a.models.empty()) {
        models = load_model_set(a.models, scenario);
    } else {
        info("no --models directory given; training per-node models in memory");
        NetConfig base = make_net_config(8, 5, a.horizon, a.epochs, a.learning_rate);
        models = train_scenario_models(scenario, base, a.seed);
    }

    RouteSimOptions options;
    options.transmission_range = a.range > 0.0 ? a.range : scenario.transmission_range;
    options.horizon = a.horizon;
    options.policies = parse_policies(a.policies);
    options.max_hops = a.max_hops;

    const std::vector<SimulationReport> reports =
        run_comparison(scenario, truth, models, options);
    if (!a.out.empty()) {
        write_reports_json(a.out, reports);
        fs::path csv = a.out;
        csv.replace_extension(".csv");
        write_reports_csv(csv, reports);
    }
    for (const SimulationReport& r : reports) {
        std::cout << r.policy << ": path=";
        if (r.chosen_path.empty()) {
            std::cout << "(no route)";
        } else {
            for (std::size_t i = 0; i < r.chosen_path.size(); ++i) {
                std::cout << (i ? "-" : "") << r.chosen_path[i];
            }
        }
        std::cout << " lifetime=" << format_double(r.realized_lifetime)
                  << "s interruptions=" << r.interruptions
                  << " rediscoveries=" << r.rediscoveries << '\n';
    }
}

// --------------------------------------------------------------- paper-eval

struct PaperEvalArgs {
    std::uint64_t seed = 1;
    std::string territory = "1000x1000";
    double v_min = 0.0, v_max = 20.0, pause_max = 60.0, interval = 10.0;
    std::size_t count = 400, split = 200;
    int n_input = 8, n_hidden = 5, horizon = 3, epochs = 500;
    double learning_rate = 0.05;
    std::string out;
};

void run_paper_eval_cmd(const PaperEvalArgs& a) {
    PaperEvalConfig cfg;
    cfg.seed = a.seed;
    cfg.territory = parse_territory(a.territory);
    cfg.v_min = a.v_min;
    cfg.v_max = a.v_max;
    cfg.pause_max = a.pause_max;
    cfg.interval = a.interval;
    cfg.count = a.count;
    cfg.split = a.split;
    cfg.net = make_net_config(a.n_input, a.n_hidden, a.horizon, a.epochs, a.learning_rate);

    const PaperEvalResult result = run_paper_eval(cfg, a.out);
    std::cout << "x: E_train=" << format_double(result.x.eval->e_train)
              << " E_gener=" << format_double(result.x.eval->e_gener) << '\n';
    std::cout << "y: E_train=" << format_double(result.y.eval->e_train)
              << " E_gener=" << format_double(result.y.eval->e_gener) << '\n';
}

// --------------------------------------------------------------------- grid

struct GridArgs {
    std::uint64_t seed = 1;
    int series = 10;
    std::string territory = "1000x1000";
    double v_min = 0.0, v_max = 20.0, pause_max = 60.0, interval = 10.0;
    std::size_t count = 400, split = 200;
    int ne_min = 4, ne_max = 12, nc_min = 3, nc_max = 8;
    int horizon = 3, epochs = 60;
    double learning_rate = 0.25;
    std::string out;
};

void run_grid(const GridArgs& a) {
    GridExperimentConfig cfg;
    cfg.seed = a.seed;
    cfg.n_series = a.series;
    cfg.territory = parse_territory(a.territory);
    cfg.v_min = a.v_min;
    cfg.v_max = a.v_max;
    cfg.pause_max = a.pause_max;
    cfg.interval = a.interval;
    cfg.count = a.count;
    cfg.split = a.split;
    cfg.n_input_range = {a.ne_min, a.ne_max};
    cfg.n_hidden_range = {a.nc_min, a.nc_max};
    cfg.net = make_net_config(a.ne_min, a.nc_min, a.horizon, a.epochs, a.learning_rate);

    const GridExperimentResult result = run_grid_experiment(cfg);
    write_grid_csv(a.out, result);
    std::cout << "selected n_input=" << result.grid.best_n_input
              << " n_hidden=" << result.grid.best_n_hidden << '\n';
    std::cout << "per-series optimal n_input:";
    for (int ne : result.per_series_best_n_input) {
        std::cout << ' ' << ne;
    }
    std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mobility prediction and stable-path routing toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    bool verbose = false;
    app.add_option("--config", config_path, "JSON config file; flags override its values");
    app.add_flag("--verbose", verbose, "Verbose diagnostics on stderr");

    GenTraceArgs gen;
    CLI::App* gen_cmd = app.add_subcommand("gen-trace", "Generate a Random Waypoint trace CSV");
    gen_cmd->fallthrough();
    auto* gen_seed = gen_cmd->add_option("--seed", gen.seed, "Global seed");
    auto* gen_vmin = gen_cmd->add_option("--vmin", gen.v_min, "Minimum speed (m/s)");
    auto* gen_vmax = gen_cmd->add_option("--vmax", gen.v_max, "Maximum speed (m/s)");
    auto* gen_pause = gen_cmd->add_option("--pause-max", gen.pause_max, "Maximum pause (s)");
    auto* gen_dur = gen_cmd->add_option("--duration", gen.duration, "Trace duration (s)");
    auto* gen_int = gen_cmd->add_option("--interval", gen.interval, "Sampling interval (s)");
    auto* gen_terr =
        gen_cmd->add_option("--territory", gen.territory, "Territory WxH (or WxHxD) in meters");
    gen_cmd->add_option("--nodes", gen.nodes, "Number of nodes")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--start", gen.start, "First sample time (s)");
    gen_cmd->add_option("--out", gen.out, "Output trace CSV")->required();

    TrainArgs tr;
    CLI::App* tr_cmd = app.add_subcommand("train", "Train one coordinate predictor");
    tr_cmd->fallthrough();
    tr_cmd->add_option("--trace", tr.trace, "Input trace CSV")->required();
    tr_cmd->add_option("--node", tr.node, "Node id");
    tr_cmd->add_option("--coord", tr.coord, "Coordinate: x, y or z")
        ->check(CLI::IsMember({"x", "y", "z"}));
    auto* tr_ne = tr_cmd->add_option("--ne", tr.n_input, "Input neurons");
    auto* tr_nc = tr_cmd->add_option("--nc", tr.n_hidden, "Hidden neurons");
    auto* tr_hor = tr_cmd->add_option("--horizon", tr.horizon, "Prediction steps");
    auto* tr_ep = tr_cmd->add_option("--epochs", tr.epochs, "Training epochs");
    auto* tr_lr = tr_cmd->add_option("--lr", tr.learning_rate, "Learning rate");
    auto* tr_split =
        tr_cmd->add_option("--split", tr.split, "Training window length (0: whole series)");
    auto* tr_seed = tr_cmd->add_option("--seed", tr.seed, "Global seed");
    tr_cmd->add_option("--out", tr.out, "Output model JSON")->required();
    tr_cmd->add_option("--curve", tr.curve, "Optional error-curve CSV");

    PredictArgs pr;
    CLI::App* pr_cmd = app.add_subcommand("predict", "Multi-step prediction from a model");
    pr_cmd->fallthrough();
    pr_cmd->add_option("--model", pr.model, "Model JSON")->required();
    pr_cmd->add_option("--trace", pr.trace, "Trace CSV with the node's history")->required();
    pr_cmd->add_option("--node", pr.node, "Node id (default: model metadata)");
    pr_cmd->add_option("--coord", pr.coord, "Coordinate (default: model metadata)");
    pr_cmd->add_option("--at", pr.at, "Sample time to predict from (s)")->required();
    pr_cmd->add_option("--steps", pr.steps, "Steps ahead (default: model horizon)");

    LetArgs le;
    CLI::App* le_cmd = app.add_subcommand("let", "Predicted link expiration time");
    le_cmd->fallthrough();
    le_cmd->add_option("--model-a", le.model_a, "Model prefix for node a (<prefix>_x.json...)")
        ->required();
    le_cmd->add_option("--model-b", le.model_b, "Model prefix for node b")->required();
    le_cmd->add_option("--trace", le.trace, "Trace CSV with both nodes")->required();
    le_cmd->add_option("--node-a", le.node_a, "Node a id (default: model metadata)");
    le_cmd->add_option("--node-b", le.node_b, "Node b id (default: model metadata)");
    le_cmd->add_option("--at", le.at, "Sample time to predict from (s)")->required();
    auto* le_range = le_cmd->add_option("--range", le.range, "Transmission range (m)");
    le_cmd->add_option("--steps", le.steps, "Prediction horizon");

    RouteSimArgs rs;
    CLI::App* rs_cmd =
        app.add_subcommand("route-sim", "Compare stable-path and shortest-hop routing");
    rs_cmd->fallthrough();
    auto* rs_scn = rs_cmd->add_option("--scenario", rs.scenario, "Scenario JSON");
    rs_cmd->add_flag("--fig2", rs.fig2, "Use the built-in four-node example scenario");
    rs_cmd->add_option("--models", rs.models,
                       "Directory with <node>_<coord>.json models (default: train in memory)");
    auto* rs_range = rs_cmd->add_option("--range", rs.range, "Transmission range (m)");
    auto* rs_hor = rs_cmd->add_option("--horizon", rs.horizon, "Prediction horizon");
    auto* rs_pol = rs_cmd->add_option("--policies", rs.policies, "Comma-separated policy list");
    auto* rs_hops = rs_cmd->add_option("--max-hops", rs.max_hops, "Path length cap");
    rs_cmd->add_option("--epochs", rs.epochs, "Epochs for in-memory training");
    rs_cmd->add_option("--lr", rs.learning_rate, "Learning rate for in-memory training");
    auto* rs_seed = rs_cmd->add_option("--seed", rs.seed, "Global seed");
    rs_cmd->add_option("--out", rs.out, "Report JSON (a .csv summary is written alongside)");

    PaperEvalArgs pe;
    CLI::App* pe_cmd = app.add_subcommand(
        "paper-eval", "Full evaluation pipeline: trace, split, train x/y, error curves");
    pe_cmd->fallthrough();
    auto* pe_seed = pe_cmd->add_option("--seed", pe.seed, "Global seed");
    auto* pe_terr = pe_cmd->add_option("--territory", pe.territory, "Territory WxH (m)");
    auto* pe_vmin = pe_cmd->add_option("--vmin", pe.v_min, "Minimum speed (m/s)");
    auto* pe_vmax = pe_cmd->add_option("--vmax", pe.v_max, "Maximum speed (m/s)");
    auto* pe_pause = pe_cmd->add_option("--pause-max", pe.pause_max, "Maximum pause (s)");
    auto* pe_int = pe_cmd->add_option("--interval", pe.interval, "Sampling interval (s)");
    pe_cmd->add_option("--count", pe.count, "Total samples");
    auto* pe_split = pe_cmd->add_option("--split", pe.split, "Training samples");
    auto* pe_ne = pe_cmd->add_option("--ne", pe.n_input, "Input neurons");
    auto* pe_nc = pe_cmd->add_option("--nc", pe.n_hidden, "Hidden neurons");
    auto* pe_hor = pe_cmd->add_option("--horizon", pe.horizon, "Prediction steps");
    auto* pe_ep = pe_cmd->add_option("--epochs", pe.epochs, "Training epochs");
    auto* pe_lr = pe_cmd->add_option("--lr", pe.learning_rate, "Learning rate");
    pe_cmd->add_option("--out", pe.out, "Output directory")->required();

    GridArgs gr;
    CLI::App* gr_cmd =
        app.add_subcommand("grid", "Structure selection over (n_input, n_hidden)");
    gr_cmd->fallthrough();
    auto* gr_seed = gr_cmd->add_option("--seed", gr.seed, "Global seed");
    gr_cmd->add_option("--series", gr.series, "Number of series")->check(CLI::PositiveNumber);
    auto* gr_terr = gr_cmd->add_option("--territory", gr.territory, "Territory WxH (m)");
    auto* gr_vmin = gr_cmd->add_option("--vmin", gr.v_min, "Minimum speed (m/s)");
    auto* gr_vmax = gr_cmd->add_option("--vmax", gr.v_max, "Maximum speed (m/s)");
    auto* gr_pause = gr_cmd->add_option("--pause-max", gr.pause_max, "Maximum pause (s)");
    auto* gr_int = gr_cmd->add_option("--interval", gr.interval, "Sampling interval (s)");
    gr_cmd->add_option("--count", gr.count, "Samples per series");
    auto* gr_split = gr_cmd->add_option("--split", gr.split, "Training samples");
    gr_cmd->add_option("--ne-min", gr.ne_min, "Smallest n_input");
    gr_cmd->add_option("--ne-max", gr.ne_max, "Largest n_input");
    gr_cmd->add_option("--nc-min", gr.nc_min, "Smallest n_hidden");
    gr_cmd->add_option("--nc-max", gr.nc_max, "Largest n_hidden");
    auto* gr_hor = gr_cmd->add_option("--horizon", gr.horizon, "Prediction steps");
    auto* gr_ep = gr_cmd->add_option("--epochs", gr.epochs, "Epochs per cell");
    auto* gr_lr = gr_cmd->add_option("--lr", gr.learning_rate, "Learning rate");
    gr_cmd->add_option("--out", gr.out, "Output table CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    verbose_logging() = verbose;

    try {
        ConfigFile cfg;
        if (!config_path.empty()) {
            cfg.load(config_path);
        }

        if (gen_cmd->parsed()) {
            cfg.layer(gen_seed, gen.seed, "seed");
            cfg.layer(gen_vmin, gen.v_min, "v_min");
            cfg.layer(gen_vmax, gen.v_max, "v_max");
            cfg.layer(gen_pause, gen.pause_max, "pause_max");
            cfg.layer(gen_dur, gen.duration, "duration");
            cfg.layer(gen_int, gen.interval, "interval");
            cfg.layer(gen_terr, gen.territory, "territory");
            run_gen_trace(gen);
        } else if (tr_cmd->parsed()) {
            cfg.layer(tr_seed, tr.seed, "seed");
            cfg.layer(tr_ne, tr.n_input, "n_input");
            cfg.layer(tr_nc, tr.n_hidden, "n_hidden");
            cfg.layer(tr_hor, tr.horizon, "horizon");
            cfg.layer(tr_ep, tr.epochs, "epochs");
            cfg.layer(tr_lr, tr.learning_rate, "learning_rate");
            cfg.layer(tr_split, tr.split, "split");
            run_train(tr);
        } else if (pr_cmd->parsed()) {
            run_predict(pr);
        } else if (le_cmd->parsed()) {
            cfg.layer(le_range, le.range, "transmission_range");
            run_let(le);
        } else if (rs_cmd->parsed()) {
            if (rs.fig2 == (rs_scn->count() > 0)) {
                throw CLI::ValidationError("route-sim",
                                           "pass exactly one of --scenario and --fig2");
            }
            cfg.layer(rs_seed, rs.seed, "seed");
            cfg.layer(rs_range, rs.range, "transmission_range");
            cfg.layer(rs_hor, rs.horizon, "horizon");
            cfg.layer(rs_pol, rs.policies, "policies");
            cfg.layer(rs_hops, rs.max_hops, "max_hops");
            run_route_sim(rs);
        } else if (pe_cmd->parsed()) {
            cfg.layer(pe_seed, pe.seed, "seed");
            cfg.layer(pe_terr, pe.territory, "territory");
            cfg.layer(pe_vmin, pe.v_min, "v_min");
            cfg.layer(pe_vmax, pe.v_max, "v_max");
            cfg.layer(pe_pause, pe.pause_max, "pause_max");
            cfg.layer(pe_int, pe.interval, "interval");
            cfg.layer(pe_split, pe.split, "split");
            cfg.layer(pe_ne, pe.n_input, "n_input");
            cfg.layer(pe_nc, pe.n_hidden, "n_hidden");
            cfg.layer(pe_hor, pe.horizon, "horizon");
            cfg.layer(pe_ep, pe.epochs, "epochs");
            cfg.layer(pe_lr, pe.learning_rate, "learning_rate");
            run_paper_eval_cmd(pe);
        } else if (gr_cmd->parsed()) {
            cfg.layer(gr_seed, gr.seed, "seed");
            cfg.layer(gr_terr, gr.territory, "territory");
            cfg.layer(gr_vmin, gr.v_min, "v_min");
            cfg.layer(gr_vmax, gr.v_max, "v_max");
            cfg.layer(gr_pause, gr.pause_max, "pause_max");
            cfg.layer(gr_int, gr.interval, "interval");
            cfg.layer(gr_split, gr.split, "split");
            cfg.layer(gr_hor, gr.horizon, "horizon");
            cfg.layer(gr_ep, gr.epochs, "epochs");
            cfg.layer(gr_lr, gr.learning_rate, "learning_rate");
            run_grid(gr);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
