#include "mobipred/pipeline.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mobipred/io.hpp"
#include "mobipred/rng.hpp"

namespace mobipred {

namespace {

LocationSeries generate_series(std::uint64_t seed, const Territory& territory, double v_min,
                               double v_max, double pause_max, double interval,
                               std::size_t count, const std::string& node_id) {
    RwmParams params;
    params.territory = territory;
    params.v_min = v_min;
    params.v_max = v_max;
    params.pause_max = pause_max;
    params.duration = interval * static_cast<double>(count);
    params.rng_seed = seed;
    return sample_trace(generate_rwm_trace(params), interval, 0.0, count, node_id);
}

}  // namespace

TrainOutcome train_with_curves(const std::vector<double>& raw, NetConfig cfg, std::size_t split,
                               std::vector<double>* gener_curve) {
    const Scaler scaler = fit_scaler(std::span<const double>(raw).first(split));
    const std::vector<double> scaled = scaler.scale_all(raw);
    const std::span<const double> scaled_span(scaled);

    RecurrentNet net(cfg);
    std::vector<double> train_curve;
    gener_curve->clear();
    for (int e = 0; e < cfg.epochs; ++e) {
        train_curve.push_back(train_epoch(net, scaled_span.first(split)));
        gener_curve->push_back(segment_error(net, scaled_span.subspan(split)));
    }
    TrainOutcome outcome{{std::move(net), scaler}, std::move(train_curve), std::nullopt};
    outcome.eval = evaluate(outcome.model.net, scaled_span, split);
    return outcome;
}

namespace {

// Per-row k-step-ahead predictions of the value at each test-half time:
// column k is filled from the window ending k steps earlier.
struct PredictionTable {
    std::vector<double> times;
    std::vector<double> actual;
    // [k-1][row]; NaN where no prediction exists
    std::vector<std::vector<double>> stepped;
};

PredictionTable build_prediction_table(const CoordinateModel& model,
                                       const std::vector<double>& raw,
                                       const LocationSeries& series, std::size_t split) {
    const NetConfig& cfg = model.net.config();
    const int horizon = cfg.horizon;
    const std::vector<double> scaled = model.scaler.scale_all(raw);

    PredictionTable table;
    const std::size_t rows = raw.size() - split;
    table.times.resize(rows);
    table.actual.resize(rows);
    table.stepped.assign(horizon, std::vector<double>(rows, std::nan("")));
    for (std::size_t r = 0; r < rows; ++r) {
        table.times[r] = series.time_at(split + r);
        table.actual[r] = raw[split + r];
    }
    // Windows whose history lies fully in the test half.
    for (std::size_t t0 = split + cfg.n_input - 1; t0 + horizon < raw.size(); ++t0) {
        const std::span<const double> history(scaled.data() + t0 + 1 - cfg.n_input,
                                              static_cast<std::size_t>(cfg.n_input));
        const Prediction pred = predict_multi_step(model.net, history, horizon);
        for (int k = 1; k <= horizon; ++k) {
            table.stepped[k - 1][t0 + k - split] = model.scaler.unscale(pred.outputs[k - 1]);
        }
    }
    return table;
}

std::string cell(double v) {
    return std::isnan(v) ? std::string() : format_double(v);
}

}  // namespace

PaperEvalResult run_paper_eval(const PaperEvalConfig& cfg) {
    if (cfg.split == 0 || cfg.split >= cfg.count) {
        throw std::invalid_argument("split must fall inside the series");
    }
    LocationSeries series =
        generate_series(derive_seed(cfg.seed, "trace"), cfg.territory, cfg.v_min, cfg.v_max,
                        cfg.pause_max, cfg.interval, cfg.count, "n0");

    NetConfig net_cfg = cfg.net;
    net_cfg.n_feedback = default_feedback(net_cfg.horizon, net_cfg.n_input);
    std::vector<double> x_gener, y_gener;
    net_cfg.rng_seed = derive_seed(cfg.seed, "net/x");
    TrainOutcome x = train_with_curves(series.x, net_cfg, cfg.split, &x_gener);
    net_cfg.rng_seed = derive_seed(cfg.seed, "net/y");
    TrainOutcome y = train_with_curves(series.y, net_cfg, cfg.split, &y_gener);
    return PaperEvalResult{std::move(series), std::move(x), std::move(y), std::move(x_gener),
                           std::move(y_gener)};
}

PaperEvalResult run_paper_eval(const PaperEvalConfig& cfg,
                               const std::filesystem::path& out_dir) {
    PaperEvalResult result = run_paper_eval(cfg);
    std::filesystem::create_directories(out_dir);

    const PredictionTable tx =
        build_prediction_table(result.x.model, result.series.x, result.series, cfg.split);
    const PredictionTable ty =
        build_prediction_table(result.y.model, result.series.y, result.series, cfg.split);

    const auto write_pred = [&](const std::filesystem::path& path, const PredictionTable& t) {
        std::ostringstream out;
        out << "time,actual";
        for (std::size_t k = 1; k <= t.stepped.size(); ++k) {
            out << ",pred_" << k;
        }
        out << '\n';
        for (std::size_t r = 0; r < t.times.size(); ++r) {
            out << format_double(t.times[r]) << ',' << format_double(t.actual[r]);
            for (const auto& col : t.stepped) {
                out << ',' << cell(col[r]);
            }
            out << '\n';
        }
        write_file(path, out.str());
    };
    write_pred(out_dir / "x_pred.csv", tx);
    write_pred(out_dir / "y_pred.csv", ty);

    {
        std::ostringstream out;
        out << "time,actual_x,actual_y";
        for (std::size_t k = 1; k <= tx.stepped.size(); ++k) {
            out << ",pred_" << k << "_x,pred_" << k << "_y";
        }
        out << '\n';
        for (std::size_t r = 0; r < tx.times.size(); ++r) {
            out << format_double(tx.times[r]) << ',' << format_double(tx.actual[r]) << ','
                << format_double(ty.actual[r]);
            for (std::size_t k = 0; k < tx.stepped.size(); ++k) {
                out << ',' << cell(tx.stepped[k][r]) << ',' << cell(ty.stepped[k][r]);
            }
            out << '\n';
        }
        write_file(out_dir / "trajectory.csv", out.str());
    }

    std::vector<double> e_train(result.x.epoch_error.size());
    std::vector<double> e_gener(result.x.epoch_error.size());
    for (std::size_t i = 0; i < e_train.size(); ++i) {
        e_train[i] = result.x.epoch_error[i] + result.y.epoch_error[i];
        e_gener[i] = result.x_gener_curve[i] + result.y_gener_curve[i];
    }
    write_error_curve_csv(out_dir / "errors.csv", e_train, e_gener);
    return result;
}

GridExperimentResult run_grid_experiment(const GridExperimentConfig& cfg) {
    std::vector<std::vector<double>> series;
    series.reserve(cfg.n_series);
    for (int s = 0; s < cfg.n_series; ++s) {
        const auto seed = derive_seed(cfg.seed, "grid-trace/" + std::to_string(s));
        series.push_back(generate_series(seed, cfg.territory, cfg.v_min, cfg.v_max,
                                         cfg.pause_max, cfg.interval, cfg.count, "n0")
                             .x);
    }
    NetConfig base = cfg.net;
    base.rng_seed = cfg.seed;

    GridExperimentResult result;
    result.grid = grid_select(series, cfg.n_input_range, cfg.n_hidden_range, base, cfg.split);

    result.per_series_best_n_input.resize(series.size());
    for (std::size_t s = 0; s < series.size(); ++s) {
        std::size_t best = 0;
        for (std::size_t cell = 1; cell < result.grid.cells.size(); ++cell) {
            if (result.grid.per_series[cell][s] < result.grid.per_series[best][s]) {
                best = cell;
            }
        }
        result.per_series_best_n_input[s] = result.grid.cells[best].n_input;
    }
    return result;
}

void write_grid_csv(const std::filesystem::path& path, const GridExperimentResult& result) {
    std::ostringstream out;
    out << "n_input,n_hidden,mean_e_gener,selected\n";
    for (const GridCell& cell : result.grid.cells) {
        const bool selected = cell.n_input == result.grid.best_n_input &&
                              cell.n_hidden == result.grid.best_n_hidden;
        out << cell.n_input << ',' << cell.n_hidden << ',' << format_double(cell.mean_error)
            << ',' << (selected ? 1 : 0) << '\n';
    }
    write_file(path, out.str());
}

ModelSet train_scenario_models(const Scenario& scenario, const NetConfig& base_cfg,
                               std::uint64_t seed) {
    ModelSet models;
    for (const auto& [id, series] : scenario.nodes) {
        const auto train_coord = [&](const std::vector<double>& raw, const char* coord) {
            NetConfig cfg = base_cfg;
            cfg.n_feedback = default_feedback(cfg.horizon, cfg.n_input);
            cfg.rng_seed = derive_seed(seed, "model/" + id + "/" + coord);
            return train_model(raw, cfg, raw.size()).model;
        };
        NodeModel model{train_coord(series.x, "x"), train_coord(series.y, "y"), std::nullopt};
        if (series.has_z()) {
            model.z = train_coord(*series.z, "z");
        }
        models.emplace(id, std::move(model));
    }
    return models;
}

}  // namespace mobipred
