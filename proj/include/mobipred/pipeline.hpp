#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "mobipred/mobility.hpp"
#include "mobipred/predictor.hpp"
#include "mobipred/routing.hpp"

namespace mobipred {

/// Reproduction of the evaluation protocol: one Random Waypoint node,
/// per-coordinate nets, train on the first `split` samples, test on the rest.
struct PaperEvalConfig {
    std::uint64_t seed = 1;
    Territory territory;
    double v_min = 0.0;
    double v_max = 20.0;
    double pause_max = 60.0;
    double interval = 10.0;
    std::size_t count = 400;
    std::size_t split = 200;
    NetConfig net;  // n_input=8, n_hidden=5, horizon=3 by default
};

struct PaperEvalResult {
    LocationSeries series;
    TrainOutcome x;
    TrainOutcome y;
    std::vector<double> x_gener_curve;  // per-epoch generalization errors
    std::vector<double> y_gener_curve;
};

/// train_model variant that also records the per-epoch generalization error
/// (the data behind an error-curve CSV).
TrainOutcome train_with_curves(const std::vector<double>& raw, NetConfig cfg, std::size_t split,
                               std::vector<double>* gener_curve);

/// Runs the pipeline in memory.
PaperEvalResult run_paper_eval(const PaperEvalConfig& cfg);

/// Runs the pipeline and writes x_pred.csv, y_pred.csv, trajectory.csv and
/// errors.csv (per-epoch summed error of both nets) into out_dir.
PaperEvalResult run_paper_eval(const PaperEvalConfig& cfg,
                               const std::filesystem::path& out_dir);

/// Generates `n_series` independent Random Waypoint coordinate series for
/// structure selection (the x coordinate of one node per seed).
struct GridExperimentConfig {
    std::uint64_t seed = 1;
    int n_series = 10;
    Territory territory;
    double v_min = 0.0;
    double v_max = 20.0;
    double pause_max = 60.0;
    double interval = 10.0;
    std::size_t count = 400;
    std::size_t split = 200;
    std::pair<int, int> n_input_range{4, 12};
    std::pair<int, int> n_hidden_range{3, 8};
    NetConfig net;  // epochs and learning rate used per cell
};

struct GridExperimentResult {
    GridResult grid;
    std::vector<int> per_series_best_n_input;
};

GridExperimentResult run_grid_experiment(const GridExperimentConfig& cfg);

/// Grid table CSV: n_input,n_hidden,mean_e_gener,selected.
void write_grid_csv(const std::filesystem::path& path, const GridExperimentResult& result);

/// Trains one model per node and coordinate of the scenario (on the full
/// series); deterministic given the seed.
ModelSet train_scenario_models(const Scenario& scenario, const NetConfig& base_cfg,
                               std::uint64_t seed);

}  // namespace mobipred
