#include "mobipred/predictor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "mobipred/log.hpp"
#include "mobipred/rng.hpp"

namespace mobipred {

void NetConfig::validate() const {
    if (n_input < 1 || n_hidden < 1) {
        throw std::invalid_argument("layer sizes must be >= 1");
    }
    if (n_feedback < 1 || n_feedback > n_input) {
        throw std::invalid_argument("n_feedback must be in [1, n_input]");
    }
    if (horizon < 1) {
        throw std::invalid_argument("horizon must be >= 1");
    }
    // learning_rate == 0 is allowed: training becomes a no-op.
    if (learning_rate < 0.0 || !std::isfinite(learning_rate)) {
        throw std::invalid_argument("learning_rate must be finite and >= 0");
    }
    if (epochs < 0) {
        throw std::invalid_argument("epochs must be >= 0");
    }
}

int default_feedback(int horizon, int n_input) {
    return std::clamp(horizon - 1, 1, n_input);
}

double sigmoid(double x) {
    double v;
    if (x >= 0.0) {
        v = 1.0 / (1.0 + std::exp(-x));
    } else {
        const double e = std::exp(x);
        v = e / (1.0 + e);
    }
    // Saturated values are nudged to the nearest representable number
    // inside (0, 1) so downstream code can rely on the open interval.
    if (v >= 1.0) {
        v = std::nextafter(1.0, 0.0);
    } else if (v <= 0.0) {
        v = std::nextafter(0.0, 1.0);
    }
    return v;
}

double Scaler::scale_clamped(double v, std::size_t* clamped) const {
    double s = scale(v);
    if (s < 0.001 || s > 0.999) {
        if (clamped != nullptr) {
            ++*clamped;
        }
        s = std::clamp(s, 0.001, 0.999);
    }
    return s;
}

std::vector<double> Scaler::scale_all(std::span<const double> values) const {
    std::vector<double> out;
    out.reserve(values.size());
    std::size_t clamped = 0;
    for (double v : values) {
        out.push_back(scale_clamped(v, &clamped));
    }
    if (clamped > 0) {
        warn(std::to_string(clamped) + " value(s) fell outside the scaler range and were clamped");
    }
    return out;
}

Scaler fit_scaler(std::span<const double> values, double margin) {
    if (values.empty()) {
        throw std::invalid_argument("cannot fit a scaler on an empty window");
    }
    if (!(margin >= 0.0 && margin < 0.5)) {
        throw std::invalid_argument("margin must be in [0, 0.5)");
    }
    const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    const double mn = *mn_it;
    const double mx = *mx_it;
    Scaler s;
    if (mx == mn) {
        s.gain = 1.0;
        s.offset = 0.5 - mn;
    } else {
        s.gain = (1.0 - 2.0 * margin) / (mx - mn);
        s.offset = margin - s.gain * mn;
    }
    return s;
}

RecurrentNet::RecurrentNet(const NetConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    Rng rng(cfg_.rng_seed);
    w_in_hidden_.resize(static_cast<std::size_t>(cfg_.n_input + 1) * cfg_.n_hidden);
    w_hidden_out_.resize(static_cast<std::size_t>(cfg_.n_hidden) + 1);
    for (double& w : w_in_hidden_) {
        w = rng.uniform(-0.5, 0.5);
    }
    for (double& w : w_hidden_out_) {
        w = rng.uniform(-0.5, 0.5);
    }
}

RecurrentNet::RecurrentNet(const NetConfig& cfg, std::vector<double> w_in_hidden,
                           std::vector<double> w_hidden_out)
    : cfg_(cfg), w_in_hidden_(std::move(w_in_hidden)), w_hidden_out_(std::move(w_hidden_out)) {
    cfg_.validate();
    const auto expect_ih = static_cast<std::size_t>(cfg_.n_input + 1) * cfg_.n_hidden;
    const auto expect_ho = static_cast<std::size_t>(cfg_.n_hidden) + 1;
    if (w_in_hidden_.size() != expect_ih || w_hidden_out_.size() != expect_ho) {
        throw std::invalid_argument("weight shapes do not match the configuration");
    }
}

ForwardStep forward_one(const RecurrentNet& net, std::span<const double> input) {
    const NetConfig& cfg = net.config();
    if (static_cast<int>(input.size()) != cfg.n_input) {
        throw std::invalid_argument("input vector length must equal n_input");
    }
    const auto& w_ih = net.w_in_hidden();
    const auto& w_ho = net.w_hidden_out();
    const int ne = cfg.n_input;
    const int nc = cfg.n_hidden;

    ForwardStep step;
    step.input.assign(input.begin(), input.end());
    step.hidden_pre.resize(nc);
    step.hidden_act.resize(nc);
    for (int c = 0; c < nc; ++c) {
        double sum = w_ih[static_cast<std::size_t>(ne) * nc + c];  // bias unit, input 1
        for (int e = 0; e < ne; ++e) {
            sum += w_ih[static_cast<std::size_t>(e) * nc + c] * input[e];
        }
        step.hidden_pre[c] = sum;
        step.hidden_act[c] = sigmoid(sum);
    }
    double out = w_ho[nc];  // bias unit
    for (int c = 0; c < nc; ++c) {
        out += w_ho[c] * step.hidden_act[c];
    }
    step.out_pre = out;
    step.output = sigmoid(out);
    return step;
}

Prediction predict_multi_step(const RecurrentNet& net, std::span<const double> history,
                              int horizon) {
    const NetConfig& cfg = net.config();
    if (static_cast<int>(history.size()) != cfg.n_input) {
        throw std::invalid_argument("history length must equal n_input");
    }
    if (horizon < 1) {
        throw std::invalid_argument("horizon must be >= 1");
    }
    std::vector<double> window(history.begin(), history.end());
    Prediction pred;
    pred.outputs.reserve(horizon);
    pred.trace.steps.reserve(horizon);
    for (int k = 0; k < horizon; ++k) {
        ForwardStep step = forward_one(net, window);
        pred.outputs.push_back(step.output);
        window.erase(window.begin());
        window.push_back(step.output);
        pred.trace.steps.push_back(std::move(step));
    }
    return pred;
}

namespace {

void axpy(std::vector<double>& y, double a, const std::vector<double>& x) {
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] += a * x[i];
    }
}

}  // namespace

GradientResult bptt_gradient(const RecurrentNet& net, std::span<const double> history,
                             std::span<const double> targets) {
    const NetConfig& cfg = net.config();
    if (static_cast<int>(targets.size()) != cfg.horizon) {
        throw std::invalid_argument("targets length must equal the configured horizon");
    }
    const int ne = cfg.n_input;
    const int nc = cfg.n_hidden;
    const int steps = cfg.horizon;
    const auto& w_ih = net.w_in_hidden();
    const auto& w_ho = net.w_hidden_out();

    const Prediction pred = predict_multi_step(net, history, steps);

    GradientResult result;
    result.gradient.w_in_hidden.assign(w_ih.size(), 0.0);
    result.gradient.w_hidden_out.assign(w_ho.size(), 0.0);

    // total[k] holds the total derivative of output k with respect to every
    // weight, including the influence routed through earlier fed-back
    // outputs still sitting in the input window.
    std::vector<Gradient> total(steps);
    for (int k = 0; k < steps; ++k) {
        const ForwardStep& st = pred.trace.steps[k];
        const double fp_out = sigmoid_deriv_from_output(st.output);

        Gradient& tk = total[k];
        tk.w_in_hidden.assign(w_ih.size(), 0.0);
        tk.w_hidden_out.assign(w_ho.size(), 0.0);

        for (int c = 0; c < nc; ++c) {
            tk.w_hidden_out[c] = fp_out * st.hidden_act[c];
        }
        tk.w_hidden_out[nc] = fp_out;

        for (int c = 0; c < nc; ++c) {
            const double path = fp_out * w_ho[c] * sigmoid_deriv_from_output(st.hidden_act[c]);
            for (int e = 0; e < ne; ++e) {
                tk.w_in_hidden[static_cast<std::size_t>(e) * nc + c] = path * st.input[e];
            }
            tk.w_in_hidden[static_cast<std::size_t>(ne) * nc + c] = path;
        }

        // Chain through the outputs fed back into the window: the output of
        // step k-j occupies input slot ne-j.
        const int depth = std::min(k, cfg.n_feedback);
        for (int j = 1; j <= depth; ++j) {
            const int slot = ne - j;
            if (slot < 0) {
                break;
            }
            double coeff = 0.0;
            for (int c = 0; c < nc; ++c) {
                coeff += w_ho[c] * sigmoid_deriv_from_output(st.hidden_act[c]) *
                         w_ih[static_cast<std::size_t>(slot) * nc + c];
            }
            coeff *= fp_out;
            axpy(tk.w_in_hidden, coeff, total[k - j].w_in_hidden);
            axpy(tk.w_hidden_out, coeff, total[k - j].w_hidden_out);
        }

        const double resid = st.output - targets[k];
        result.loss += 0.5 * resid * resid;
        axpy(result.gradient.w_in_hidden, resid, tk.w_in_hidden);
        axpy(result.gradient.w_hidden_out, resid, tk.w_hidden_out);
    }
    return result;
}

double window_loss(const RecurrentNet& net, std::span<const double> history,
                   std::span<const double> targets) {
    const Prediction pred = predict_multi_step(net, history, static_cast<int>(targets.size()));
    double loss = 0.0;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        const double resid = pred.outputs[k] - targets[k];
        loss += 0.5 * resid * resid;
    }
    return loss;
}

Gradient finite_diff_gradient(const RecurrentNet& net, std::span<const double> history,
                              std::span<const double> targets, double step) {
    if (!(step > 0.0)) {
        throw std::invalid_argument("finite-difference step must be > 0");
    }
    RecurrentNet work = net;
    Gradient grad;
    grad.w_in_hidden.assign(net.w_in_hidden().size(), 0.0);
    grad.w_hidden_out.assign(net.w_hidden_out().size(), 0.0);

    auto differentiate = [&](std::vector<double>& weights, std::vector<double>& out) {
        for (std::size_t i = 0; i < weights.size(); ++i) {
            const double saved = weights[i];
            weights[i] = saved + step;
            const double plus = window_loss(work, history, targets);
            weights[i] = saved - step;
            const double minus = window_loss(work, history, targets);
            weights[i] = saved;
            out[i] = (plus - minus) / (2.0 * step);
        }
    };
    differentiate(work.w_in_hidden(), grad.w_in_hidden);
    differentiate(work.w_hidden_out(), grad.w_hidden_out);
    return grad;
}

double train_epoch(RecurrentNet& net, std::span<const double> scaled) {
    const NetConfig& cfg = net.config();
    const std::size_t need = static_cast<std::size_t>(cfg.n_input) + cfg.horizon;
    if (scaled.size() < need) {
        throw std::invalid_argument("series too short for one training window");
    }
    double total = 0.0;
    const std::size_t first = cfg.n_input - 1;
    const std::size_t last = scaled.size() - 1 - cfg.horizon;
    for (std::size_t t0 = first; t0 <= last; ++t0) {
        const auto history = scaled.subspan(t0 + 1 - cfg.n_input, cfg.n_input);
        const auto targets = scaled.subspan(t0 + 1, cfg.horizon);
        const GradientResult g = bptt_gradient(net, history, targets);
        total += g.loss;
        axpy(net.w_in_hidden(), -cfg.learning_rate, g.gradient.w_in_hidden);
        axpy(net.w_hidden_out(), -cfg.learning_rate, g.gradient.w_hidden_out);
    }
    return total;
}

std::vector<double> train(RecurrentNet& net, std::span<const double> scaled) {
    std::vector<double> curve;
    curve.reserve(net.config().epochs);
    for (int e = 0; e < net.config().epochs; ++e) {
        curve.push_back(train_epoch(net, scaled));
    }
    return curve;
}

double segment_error(const RecurrentNet& net, std::span<const double> segment) {
    const NetConfig& cfg = net.config();
    const std::size_t need = static_cast<std::size_t>(cfg.n_input) + cfg.horizon;
    if (segment.size() < need) {
        throw std::invalid_argument("segment too short for one window");
    }
    double total = 0.0;
    for (std::size_t t0 = cfg.n_input - 1; t0 <= segment.size() - 1 - cfg.horizon; ++t0) {
        total += window_loss(net, segment.subspan(t0 + 1 - cfg.n_input, cfg.n_input),
                             segment.subspan(t0 + 1, cfg.horizon));
    }
    return total;
}

EvalResult evaluate(const RecurrentNet& net, std::span<const double> scaled, std::size_t split) {
    if (split >= scaled.size()) {
        throw std::invalid_argument("split must leave points on both sides");
    }
    EvalResult result;
    result.e_train = segment_error(net, scaled.first(split));
    result.e_gener = segment_error(net, scaled.subspan(split));
    return result;
}

double persistence_error(std::span<const double> segment, int n_input, int horizon) {
    const std::size_t need = static_cast<std::size_t>(n_input) + horizon;
    if (segment.size() < need) {
        throw std::invalid_argument("segment too short for one window");
    }
    double total = 0.0;
    for (std::size_t t0 = n_input - 1; t0 <= segment.size() - 1 - horizon; ++t0) {
        for (int k = 1; k <= horizon; ++k) {
            const double resid = segment[t0] - segment[t0 + k];
            total += 0.5 * resid * resid;
        }
    }
    return total;
}

TrainOutcome train_model(std::span<const double> raw, const NetConfig& cfg, std::size_t split) {
    if (split == 0 || split > raw.size()) {
        throw std::invalid_argument("split must be in [1, series length]");
    }
    const Scaler scaler = fit_scaler(raw.first(split));
    const std::vector<double> scaled = scaler.scale_all(raw);

    RecurrentNet net(cfg);
    std::vector<double> curve = train(net, std::span<const double>(scaled).first(split));

    TrainOutcome outcome{{std::move(net), scaler}, std::move(curve), std::nullopt};
    const std::size_t need = static_cast<std::size_t>(cfg.n_input) + cfg.horizon;
    if (split >= need && raw.size() - split >= need) {
        outcome.eval = evaluate(outcome.model.net, scaled, split);
    }
    return outcome;
}

GridResult grid_select(const std::vector<std::vector<double>>& raw_series,
                       std::pair<int, int> n_input_range, std::pair<int, int> n_hidden_range,
                       const NetConfig& base_cfg, std::size_t split) {
    if (raw_series.empty()) {
        throw std::invalid_argument("grid selection needs at least one series");
    }
    if (n_input_range.first > n_input_range.second ||
        n_hidden_range.first > n_hidden_range.second) {
        throw std::invalid_argument("grid ranges must be nonempty");
    }

    GridResult result;
    for (int ne = n_input_range.first; ne <= n_input_range.second; ++ne) {
        for (int nc = n_hidden_range.first; nc <= n_hidden_range.second; ++nc) {
            result.cells.push_back({ne, nc, 0.0});
        }
    }
    result.per_series.assign(result.cells.size(), std::vector<double>(raw_series.size(), 0.0));

    auto run_cell = [&](std::size_t cell) {
        const GridCell& gc = result.cells[cell];
        for (std::size_t s = 0; s < raw_series.size(); ++s) {
            NetConfig cfg = base_cfg;
            cfg.n_input = gc.n_input;
            cfg.n_hidden = gc.n_hidden;
            cfg.n_feedback = default_feedback(cfg.horizon, cfg.n_input);
            cfg.rng_seed = derive_seed(base_cfg.rng_seed,
                                       "grid/ne=" + std::to_string(gc.n_input) +
                                           "/nc=" + std::to_string(gc.n_hidden) +
                                           "/series=" + std::to_string(s));
            const TrainOutcome out = train_model(raw_series[s], cfg, split);
            if (!out.eval) {
                throw std::invalid_argument("split leaves no room for generalization windows");
            }
            result.per_series[cell][s] = out.eval->e_gener;
        }
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers =
        std::min<unsigned>(hw, static_cast<unsigned>(result.cells.size()));
    if (workers <= 1) {
        for (std::size_t cell = 0; cell < result.cells.size(); ++cell) {
            run_cell(cell);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t cell = next.fetch_add(1); cell < result.cells.size();
                     cell = next.fetch_add(1)) {
                    run_cell(cell);
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    std::size_t best = 0;
    for (std::size_t cell = 0; cell < result.cells.size(); ++cell) {
        double sum = 0.0;
        for (double e : result.per_series[cell]) {
            sum += e;
        }
        result.cells[cell].mean_error = sum / static_cast<double>(raw_series.size());
        // Cells are ordered by (n_input, n_hidden) ascending, so strict
        // comparison keeps ties on the smaller pair.
        if (result.cells[cell].mean_error < result.cells[best].mean_error) {
            best = cell;
        }
    }
    result.best_n_input = result.cells[best].n_input;
    result.best_n_hidden = result.cells[best].n_hidden;
    return result;
}

}  // namespace mobipred
