#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace mobipred {

/// Architecture and training hyper-parameters of one scalar-series predictor.
struct NetConfig {
    int n_input = 8;     // input neurons (not counting the bias unit)
    int n_hidden = 5;    // hidden neurons (not counting the bias unit)
    int n_feedback = 2;  // fed-back predicted inputs tracked by the gradient
    int horizon = 3;     // prediction steps per window
    double learning_rate = 0.05;
    int epochs = 500;
    std::uint64_t rng_seed = 1;

    void validate() const;
};

/// Feedback depth that makes the gradient exact: at most horizon-1 outputs
/// can sit in an n_input-wide input window.
int default_feedback(int horizon, int n_input);

/// Affine map taking one coordinate series into the open interval (0, 1),
/// as required by the sigmoid output unit. scaled = gain * value + offset.
struct Scaler {
    double gain = 1.0;
    double offset = 0.0;

    double scale(double v) const { return gain * v + offset; }
    double unscale(double s) const { return (s - offset) / gain; }

    /// scale() with the result clamped into [0.001, 0.999]; values that fall
    /// outside (test data beyond the training range) are counted in
    /// *clamped when provided.
    double scale_clamped(double v, std::size_t* clamped = nullptr) const;

    std::vector<double> scale_all(std::span<const double> values) const;
};

/// Fits the affine map so the window minimum lands on `margin` and the
/// maximum on 1 - margin. A constant series maps to 0.5.
Scaler fit_scaler(std::span<const double> values, double margin = 0.1);

/// Numerically safe logistic function; the result is kept strictly inside
/// (0, 1) even where the exponential saturates.
double sigmoid(double x);
inline double sigmoid_deriv_from_output(double out) { return out * (1.0 - out); }

/// Everything recorded during one forward step, as needed by the gradient.
struct ForwardStep {
    std::vector<double> input;       // window contents, oldest value first
    std::vector<double> hidden_pre;  // weighted sums entering the hidden layer
    std::vector<double> hidden_act;  // sigmoid outputs of the hidden layer
    double out_pre = 0.0;            // weighted sum entering the output neuron
    double output = 0.0;             // predicted (scaled) value
};

struct ForwardTrace {
    std::vector<ForwardStep> steps;
};

/// Three-layer recurrent predictor: n_input inputs (+bias), n_hidden sigmoid
/// units (+bias), one sigmoid output fed back into the input window.
class RecurrentNet {
public:
    /// Weights drawn uniformly from [-0.5, 0.5] using cfg.rng_seed.
    explicit RecurrentNet(const NetConfig& cfg);
    RecurrentNet(const NetConfig& cfg, std::vector<double> w_in_hidden,
                 std::vector<double> w_hidden_out);

    const NetConfig& config() const { return cfg_; }

    /// (n_input + 1) x n_hidden weights, row-major, bias row last.
    const std::vector<double>& w_in_hidden() const { return w_in_hidden_; }
    std::vector<double>& w_in_hidden() { return w_in_hidden_; }

    /// n_hidden + 1 weights, bias weight last.
    const std::vector<double>& w_hidden_out() const { return w_hidden_out_; }
    std::vector<double>& w_hidden_out() { return w_hidden_out_; }

    double in_hidden(int input, int hidden) const {
        return w_in_hidden_[static_cast<std::size_t>(input) * cfg_.n_hidden + hidden];
    }

private:
    NetConfig cfg_;
    std::vector<double> w_in_hidden_;
    std::vector<double> w_hidden_out_;
};

/// One forward pass on an explicit input vector (length n_input).
ForwardStep forward_one(const RecurrentNet& net, std::span<const double> input);

struct Prediction {
    std::vector<double> outputs;  // scaled predictions, steps 1..horizon
    ForwardTrace trace;
};

/// Closed-loop multi-step prediction: step 1 consumes the history window
/// (oldest first), each later step shifts the window left and appends the
/// previous output.
Prediction predict_multi_step(const RecurrentNet& net, std::span<const double> history,
                              int horizon);

struct Gradient {
    std::vector<double> w_in_hidden;
    std::vector<double> w_hidden_out;
};

struct GradientResult {
    Gradient gradient;
    double loss = 0.0;  // sum over steps of 0.5 * (prediction - target)^2
};

/// Exact backpropagation-through-time gradient of the summed squared error
/// over one window, including the chain contributions through outputs fed
/// back into the input window.
GradientResult bptt_gradient(const RecurrentNet& net, std::span<const double> history,
                             std::span<const double> targets);

/// Central-difference gradient of the same loss, computed by rerunning the
/// full closed-loop forward pass per perturbed weight. Oracle for
/// bptt_gradient.
Gradient finite_diff_gradient(const RecurrentNet& net, std::span<const double> history,
                              std::span<const double> targets, double step);

/// Window loss of the current weights (used by the finite-difference path).
double window_loss(const RecurrentNet& net, std::span<const double> history,
                   std::span<const double> targets);

/// One pass over the training series with a weight update after each window;
/// returns the summed window loss of the epoch.
double train_epoch(RecurrentNet& net, std::span<const double> scaled);

/// cfg.epochs passes of train_epoch; returns the per-epoch error curve.
std::vector<double> train(RecurrentNet& net, std::span<const double> scaled);

struct EvalResult {
    double e_train = 0.0;
    double e_gener = 0.0;
};

/// Summed multi-step squared error over all windows fully inside a segment.
double segment_error(const RecurrentNet& net, std::span<const double> segment);

/// segment_error over [0, split) and [split, end) separately.
EvalResult evaluate(const RecurrentNet& net, std::span<const double> scaled, std::size_t split);

/// Error of the last-value persistence forecaster over the same windows.
double persistence_error(std::span<const double> segment, int n_input, int horizon);

/// A trained net together with the scaler fitted on its training window.
struct CoordinateModel {
    RecurrentNet net;
    Scaler scaler;
};

struct TrainOutcome {
    CoordinateModel model;
    std::vector<double> epoch_error;
    std::optional<EvalResult> eval;  // present when both sides of the split are usable
};

/// Fits the scaler on [0, split), trains on the scaled training window and
/// evaluates both sides when the split leaves room. split == size() trains
/// on the whole series.
TrainOutcome train_model(std::span<const double> raw, const NetConfig& cfg, std::size_t split);

/// Per-node model bundle (one net per coordinate).
struct NodeModel {
    CoordinateModel x;
    CoordinateModel y;
    std::optional<CoordinateModel> z;
};

struct GridCell {
    int n_input = 0;
    int n_hidden = 0;
    double mean_error = 0.0;
};

struct GridResult {
    int best_n_input = 0;
    int best_n_hidden = 0;
    std::vector<GridCell> cells;                  // row-major over (n_input, n_hidden)
    std::vector<std::vector<double>> per_series;  // [cell][series] generalization error
};

/// Trains one net per (n_input, n_hidden) pair per raw series and reports the
/// mean generalization error per pair; ties break toward smaller n_input,
/// then smaller n_hidden. Cells are evaluated in parallel.
GridResult grid_select(const std::vector<std::vector<double>>& raw_series,
                       std::pair<int, int> n_input_range, std::pair<int, int> n_hidden_range,
                       const NetConfig& base_cfg, std::size_t split);

}  // namespace mobipred
