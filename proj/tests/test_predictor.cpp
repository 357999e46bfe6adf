#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mobipred/predictor.hpp"
#include "mobipred/rng.hpp"

using namespace mobipred;

namespace {

NetConfig small_config(int ne, int nc, int horizon, std::uint64_t seed) {
    NetConfig cfg;
    cfg.n_input = ne;
    cfg.n_hidden = nc;
    cfg.horizon = horizon;
    cfg.n_feedback = default_feedback(horizon, ne);
    cfg.rng_seed = seed;
    return cfg;
}

std::vector<double> random_values(Rng& rng, std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) {
        x = rng.uniform(lo, hi);
    }
    return v;
}

// Worst relative disagreement. Components below 1e-6 are compared
// absolutely: central differences at step 1e-6 carry ~1e-11 of rounding
// noise, which swamps any relative comparison that far down.
double gradient_disagreement(const Gradient& a, const Gradient& b) {
    double worst = 0.0;
    auto compare = [&](const std::vector<double>& ga, const std::vector<double>& gb) {
        REQUIRE(ga.size() == gb.size());
        for (std::size_t i = 0; i < ga.size(); ++i) {
            const double mag = std::max(std::abs(ga[i]), std::abs(gb[i]));
            const double diff = std::abs(ga[i] - gb[i]);
            worst = std::max(worst, mag < 1e-6 ? diff : diff / mag);
        }
    };
    compare(a.w_in_hidden, b.w_in_hidden);
    compare(a.w_hidden_out, b.w_hidden_out);
    return worst;
}

}  // namespace

TEST_CASE("scaler maps the training window into the margin interval") {
    const std::vector<double> values{0.0, 100.0};
    const Scaler s = fit_scaler(values, 0.1);
    CHECK(s.scale(0.0) == doctest::Approx(0.1));
    CHECK(s.scale(100.0) == doctest::Approx(0.9));
    CHECK(s.scale(50.0) == doctest::Approx(0.5));
}

TEST_CASE("scaler maps a constant series to 0.5") {
    const std::vector<double> values{7.0, 7.0, 7.0};
    const Scaler s = fit_scaler(values);
    for (double v : values) {
        CHECK(s.scale(v) == doctest::Approx(0.5));
    }
}

TEST_CASE("scaler round-trip is exact to 1e-12 relative") {
    Rng rng(11);
    const std::vector<double> window{-250.0, 983.0};
    const Scaler s = fit_scaler(window, 0.1);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.uniform(-300.0, 1200.0);
        const double rt = s.unscale(s.scale(x));
        CHECK(std::abs(rt - x) <= 1e-12 * std::max(1.0, std::abs(x)));
    }
}

TEST_CASE("scaler clamps out-of-range values and counts them") {
    const std::vector<double> window{0.0, 10.0};
    const Scaler s = fit_scaler(window, 0.1);
    std::size_t clamped = 0;
    CHECK(s.scale_clamped(1e6, &clamped) == doctest::Approx(0.999));
    CHECK(s.scale_clamped(-1e6, &clamped) == doctest::Approx(0.001));
    CHECK(clamped == 2);
}

TEST_CASE("zero-weight net outputs 0.5 everywhere") {
    NetConfig cfg = small_config(4, 3, 3, 1);
    RecurrentNet net(cfg, std::vector<double>(5 * 3, 0.0), std::vector<double>(4, 0.0));
    const std::vector<double> input{0.1, 0.9, 0.3, 0.7};
    const ForwardStep step = forward_one(net, input);
    for (double o : step.hidden_act) {
        CHECK(o == doctest::Approx(0.5));
    }
    CHECK(step.output == doctest::Approx(0.5));

    const Prediction pred = predict_multi_step(net, input, 3);
    for (double o : pred.outputs) {
        CHECK(o == doctest::Approx(0.5));
    }
}

TEST_CASE("sigmoid derivative identity at zero") {
    CHECK(sigmoid(0.0) == doctest::Approx(0.5));
    CHECK(sigmoid_deriv_from_output(sigmoid(0.0)) == doctest::Approx(0.25));
}

TEST_CASE("single hidden unit composition") {
    // one input, one hidden unit; unit weight on the input path, zero biases
    NetConfig cfg = small_config(1, 1, 1, 1);
    RecurrentNet net(cfg, {1.0, 0.0}, {1.0, 0.0});
    const std::vector<double> input{0.0};
    const ForwardStep step = forward_one(net, input);
    CHECK(step.output == doctest::Approx(sigmoid(sigmoid(0.0))));
    CHECK(step.output == doctest::Approx(0.62246).epsilon(1e-4));
}

TEST_CASE("outputs stay strictly inside (0,1) even at saturation") {
    NetConfig cfg = small_config(2, 2, 2, 5);
    for (double w : {1e3, -1e3, 1e6}) {
        RecurrentNet net(cfg, std::vector<double>(3 * 2, w), std::vector<double>(3, w));
        const std::vector<double> history{0.999, 0.001};
        const Prediction pred = predict_multi_step(net, history, 2);
        for (double o : pred.outputs) {
            CHECK(o > 0.0);
            CHECK(o < 1.0);
        }
    }
}

TEST_CASE("multi-step prediction with horizon 1 equals forward_one") {
    NetConfig cfg = small_config(5, 4, 1, 42);
    RecurrentNet net(cfg);
    Rng rng(7);
    const std::vector<double> history = random_values(rng, 5, 0.1, 0.9);
    const Prediction pred = predict_multi_step(net, history, 1);
    CHECK(pred.outputs.size() == 1);
    CHECK(pred.outputs[0] == forward_one(net, history).output);
}

TEST_CASE("closed-loop prefix determinism") {
    // the first a outputs of an (a+b)-step prediction equal the a-step run
    NetConfig cfg = small_config(6, 4, 1, 99);
    RecurrentNet net(cfg);
    Rng rng(13);
    const std::vector<double> history = random_values(rng, 6, 0.1, 0.9);
    const Prediction longer = predict_multi_step(net, history, 7);
    const Prediction shorter = predict_multi_step(net, history, 4);
    for (std::size_t k = 0; k < shorter.outputs.size(); ++k) {
        CHECK(shorter.outputs[k] == longer.outputs[k]);
    }
}

TEST_CASE("one-step gradient equals textbook backprop") {
    NetConfig cfg = small_config(4, 3, 1, 21);
    RecurrentNet net(cfg);
    Rng rng(22);
    const std::vector<double> history = random_values(rng, 4, 0.1, 0.9);
    const std::vector<double> targets{0.3};

    const GradientResult res = bptt_gradient(net, history, targets);

    const ForwardStep step = forward_one(net, history);
    const double resid = step.output - targets[0];
    const double fp_out = sigmoid_deriv_from_output(step.output);
    for (int c = 0; c < 3; ++c) {
        CHECK(res.gradient.w_hidden_out[c] == doctest::Approx(resid * fp_out * step.hidden_act[c]));
        const double path =
            resid * fp_out * net.w_hidden_out()[c] * sigmoid_deriv_from_output(step.hidden_act[c]);
        for (int e = 0; e < 4; ++e) {
            CHECK(res.gradient.w_in_hidden[e * 3 + c] == doctest::Approx(path * history[e]));
        }
        CHECK(res.gradient.w_in_hidden[4 * 3 + c] == doctest::Approx(path));
    }
    CHECK(res.gradient.w_hidden_out[3] == doctest::Approx(resid * fp_out));
}

TEST_CASE("perfect predictions give zero loss and zero gradient") {
    NetConfig cfg = small_config(4, 2, 3, 77);
    RecurrentNet net(cfg);
    Rng rng(78);
    const std::vector<double> history = random_values(rng, 4, 0.1, 0.9);
    const Prediction pred = predict_multi_step(net, history, 3);

    const GradientResult res = bptt_gradient(net, history, pred.outputs);
    CHECK(res.loss == 0.0);
    for (double g : res.gradient.w_in_hidden) {
        CHECK(g == 0.0);
    }
    for (double g : res.gradient.w_hidden_out) {
        CHECK(g == 0.0);
    }
}

TEST_CASE("loss decomposes exactly into per-step squared errors") {
    NetConfig cfg = small_config(5, 3, 4, 31);
    cfg.n_feedback = default_feedback(4, 5);
    RecurrentNet net(cfg);
    Rng rng(32);
    const std::vector<double> history = random_values(rng, 5, 0.1, 0.9);
    const std::vector<double> targets = random_values(rng, 4, 0.1, 0.9);

    const GradientResult res = bptt_gradient(net, history, targets);
    const Prediction pred = predict_multi_step(net, history, 4);
    double expected = 0.0;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        expected += 0.5 * (pred.outputs[k] - targets[k]) * (pred.outputs[k] - targets[k]);
    }
    CHECK(res.loss == expected);
}

TEST_CASE("bptt matches finite differences on a zero-weight net") {
    NetConfig cfg = small_config(3, 2, 3, 1);
    RecurrentNet net(cfg, std::vector<double>(4 * 2, 0.0), std::vector<double>(3, 0.0));
    const std::vector<double> history{0.2, 0.5, 0.8};
    const std::vector<double> targets{0.4, 0.6, 0.5};

    const GradientResult res = bptt_gradient(net, history, targets);
    const Gradient fd = finite_diff_gradient(net, history, targets, 1e-6);
    auto max_abs_diff = [](const std::vector<double>& a, const std::vector<double>& b) {
        double worst = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            worst = std::max(worst, std::abs(a[i] - b[i]));
        }
        return worst;
    };
    CHECK(max_abs_diff(res.gradient.w_in_hidden, fd.w_in_hidden) < 1e-7);
    CHECK(max_abs_diff(res.gradient.w_hidden_out, fd.w_hidden_out) < 1e-7);
}

TEST_CASE("bptt matches finite differences on a small random net") {
    NetConfig cfg = small_config(3, 2, 3, 123);
    cfg.n_feedback = 2;
    RecurrentNet net(cfg);
    Rng rng(124);
    const std::vector<double> history = random_values(rng, 3, 0.1, 0.9);
    const std::vector<double> targets = random_values(rng, 3, 0.1, 0.9);

    const GradientResult res = bptt_gradient(net, history, targets);
    const Gradient fd = finite_diff_gradient(net, history, targets, 1e-6);
    CHECK(gradient_disagreement(res.gradient, fd) < 1e-5);
}

TEST_CASE("gradient check across 50 random configurations") {
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const int ne = rng.uniform_int(2, 8);
        const int nc = rng.uniform_int(1, 5);
        const int horizon = rng.uniform_int(1, 4);
        NetConfig cfg = small_config(ne, nc, horizon, rng.next_u64());
        RecurrentNet net(cfg);
        const std::vector<double> history = random_values(rng, ne, 0.1, 0.9);
        const std::vector<double> targets = random_values(rng, horizon, 0.1, 0.9);

        const GradientResult res = bptt_gradient(net, history, targets);
        const Gradient fd = finite_diff_gradient(net, history, targets, 1e-6);
        CAPTURE(ne);
        CAPTURE(nc);
        CAPTURE(horizon);
        CHECK(gradient_disagreement(res.gradient, fd) < 1e-5);
    }
}

TEST_CASE("truncating the feedback chain breaks gradient exactness") {
    // sanity check that the recurrent terms are load-bearing
    NetConfig cfg = small_config(4, 3, 4, 55);
    cfg.n_feedback = default_feedback(4, 4);  // 3: exact
    RecurrentNet net(cfg);
    Rng rng(56);
    const std::vector<double> history = random_values(rng, 4, 0.1, 0.9);
    const std::vector<double> targets = random_values(rng, 4, 0.1, 0.9);
    const Gradient fd = finite_diff_gradient(net, history, targets, 1e-6);

    const GradientResult exact = bptt_gradient(net, history, targets);
    CHECK(gradient_disagreement(exact.gradient, fd) < 1e-5);

    NetConfig truncated = cfg;
    truncated.n_feedback = 1;
    RecurrentNet net_trunc(truncated, net.w_in_hidden(), net.w_hidden_out());
    const GradientResult approx = bptt_gradient(net_trunc, history, targets);
    CHECK(gradient_disagreement(approx.gradient, fd) > 1e-5);
}

TEST_CASE("finite differences are deterministic and degrade with large steps") {
    NetConfig cfg = small_config(3, 2, 3, 321);
    RecurrentNet net(cfg);
    Rng rng(322);
    const std::vector<double> history = random_values(rng, 3, 0.1, 0.9);
    const std::vector<double> targets = random_values(rng, 3, 0.1, 0.9);

    const Gradient fd1 = finite_diff_gradient(net, history, targets, 1e-5);
    const Gradient fd2 = finite_diff_gradient(net, history, targets, 1e-5);
    for (std::size_t i = 0; i < fd1.w_in_hidden.size(); ++i) {
        CHECK(fd1.w_in_hidden[i] == fd2.w_in_hidden[i]);
    }

    const GradientResult exact = bptt_gradient(net, history, targets);
    const double err_small = gradient_disagreement(exact.gradient, fd1);
    const Gradient coarse = finite_diff_gradient(net, history, targets, 1e-2);
    const double err_large = gradient_disagreement(exact.gradient, coarse);
    CHECK(err_small < 1e-5);
    CHECK(err_large > err_small);
}

TEST_CASE("zero learning rate leaves weights unchanged") {
    NetConfig cfg = small_config(4, 3, 3, 9);
    cfg.learning_rate = 0.0;
    cfg.epochs = 5;
    RecurrentNet net(cfg);
    const std::vector<double> before_ih = net.w_in_hidden();
    const std::vector<double> before_ho = net.w_hidden_out();

    Rng rng(10);
    const std::vector<double> series = random_values(rng, 40, 0.1, 0.9);
    train(net, series);
    CHECK(net.w_in_hidden() == before_ih);
    CHECK(net.w_hidden_out() == before_ho);
}

TEST_CASE("training is deterministic for a fixed seed") {
    Rng rng(400);
    const std::vector<double> series = random_values(rng, 60, 0.1, 0.9);
    NetConfig cfg = small_config(8, 5, 3, 77);
    cfg.epochs = 20;
    cfg.learning_rate = 0.1;

    RecurrentNet a(cfg);
    RecurrentNet b(cfg);
    train(a, series);
    train(b, series);
    CHECK(a.w_in_hidden() == b.w_in_hidden());
    CHECK(a.w_hidden_out() == b.w_hidden_out());
}

TEST_CASE("training tracks a linear ramp") {
    // scaled ramp over the training window
    std::vector<double> series(120);
    for (std::size_t i = 0; i < series.size(); ++i) {
        series[i] = 0.1 + 0.8 * static_cast<double>(i) / (series.size() - 1);
    }
    NetConfig cfg = small_config(8, 5, 3, 3);
    cfg.epochs = 500;
    cfg.learning_rate = 0.25;
    RecurrentNet net(cfg);
    const std::vector<double> curve = train(net, series);
    CHECK(curve.back() < 0.1 * curve.front());

    // 3-step continuation of the ramp from the last window
    const std::span<const double> tail(series.data() + series.size() - 8, 8);
    const Prediction pred = predict_multi_step(net, tail, 3);
    const double slope = 0.8 / (series.size() - 1);
    double mse = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double want = series.back() + slope * (k + 1);
        mse += (pred.outputs[k] - want) * (pred.outputs[k] - want) / 3.0;
    }
    CHECK(mse < 1e-3);
}

TEST_CASE("evaluate is zero for an exactly matched constant series") {
    // zero weights fix the output at 0.5; a 0.5-valued series is predicted
    // perfectly on both sides of the split
    NetConfig cfg = small_config(4, 3, 3, 1);
    RecurrentNet net(cfg, std::vector<double>(5 * 3, 0.0), std::vector<double>(4, 0.0));
    const std::vector<double> series(40, 0.5);
    const EvalResult eval = evaluate(net, series, 20);
    CHECK(eval.e_train == 0.0);
    CHECK(eval.e_gener == 0.0);
}

TEST_CASE("converged net achieves tiny generalization error on a constant series") {
    const std::vector<double> series(60, 0.5);
    NetConfig cfg = small_config(8, 5, 3, 5);
    cfg.epochs = 300;
    cfg.learning_rate = 0.5;
    RecurrentNet net(cfg);
    train(net, std::span<const double>(series).first(30));
    const EvalResult eval = evaluate(net, series, 30);
    CHECK(eval.e_gener < 1e-4);
}

TEST_CASE("untrained net has positive generalization error on moving data") {
    Rng rng(88);
    const std::vector<double> series = random_values(rng, 80, 0.1, 0.9);
    NetConfig cfg = small_config(8, 5, 3, 6);
    RecurrentNet net(cfg);
    const EvalResult eval = evaluate(net, series, 40);
    CHECK(eval.e_gener > 0.0);
}

TEST_CASE("train_model applies the training-window scaler to the test half") {
    std::vector<double> raw(100);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        raw[i] = 100.0 + static_cast<double>(i);  // keeps drifting after the split
    }
    NetConfig cfg = small_config(8, 4, 3, 12);
    cfg.epochs = 30;
    const TrainOutcome out = train_model(raw, cfg, 50);
    REQUIRE(out.eval.has_value());
    // the training window spans [100, 149]; later values scale above 0.9
    CHECK(out.model.scaler.scale(raw[49]) == doctest::Approx(0.9));
    CHECK(out.model.scaler.scale(raw[60]) > 0.9);
}

TEST_CASE("series too short for a window is rejected") {
    NetConfig cfg = small_config(8, 3, 3, 1);
    RecurrentNet net(cfg);
    const std::vector<double> tiny(10, 0.5);
    CHECK_THROWS_AS(train_epoch(net, tiny), std::invalid_argument);
    CHECK_THROWS_AS(bptt_gradient(net, std::vector<double>(8, 0.5), std::vector<double>(2, 0.5)),
                    std::invalid_argument);
}

TEST_CASE("grid with a single combination returns it") {
    Rng rng(500);
    const std::vector<std::vector<double>> series{random_values(rng, 60, 100.0, 200.0)};
    NetConfig base = small_config(4, 3, 3, 1);
    base.epochs = 5;
    const GridResult res = grid_select(series, {4, 4}, {3, 3}, base, 30);
    CHECK(res.best_n_input == 4);
    CHECK(res.best_n_hidden == 3);
    CHECK(res.cells.size() == 1);
}

TEST_CASE("grid argmin matches its own table") {
    Rng rng(501);
    std::vector<std::vector<double>> series;
    for (int s = 0; s < 2; ++s) {
        series.push_back(random_values(rng, 80, 0.0, 500.0));
    }
    NetConfig base = small_config(4, 3, 3, 2);
    base.epochs = 8;
    base.learning_rate = 0.2;
    const GridResult res = grid_select(series, {3, 6}, {2, 4}, base, 40);

    double best = res.cells.front().mean_error;
    for (const GridCell& cell : res.cells) {
        best = std::min(best, cell.mean_error);
    }
    for (const GridCell& cell : res.cells) {
        if (cell.n_input == res.best_n_input && cell.n_hidden == res.best_n_hidden) {
            CHECK(cell.mean_error == best);
        } else {
            CHECK(cell.mean_error >= best);
        }
    }
}
