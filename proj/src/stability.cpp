#include "mobipred/stability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mobipred/io.hpp"
#include "mobipred/log.hpp"

namespace mobipred {

std::string to_string(const ExpirationTime& et) {
    return et.beyond ? "beyond-horizon" : format_double(et.value);
}

DistanceSeries distances(const PredictedLocations& a, const PredictedLocations& b) {
    if (a.times.size() != b.times.size() || a.base_time != b.base_time) {
        throw std::invalid_argument("predicted locations are misaligned");
    }
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        if (a.times[i] != b.times[i]) {
            throw std::invalid_argument("predicted locations are misaligned");
        }
    }
    if (a.points.size() != a.times.size() || b.points.size() != b.times.size()) {
        throw std::invalid_argument("times and points must have equal length");
    }
    DistanceSeries d;
    d.base_time = a.base_time;
    d.times = a.times;
    d.values.reserve(a.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        d.values.push_back(distance(a.points[i], b.points[i]));
    }
    return d;
}

double DistancePolynomial::evaluate(double t) const {
    const double u = (t - time_origin) / time_scale;
    double acc = 0.0;
    for (double c : coeffs) {
        acc = acc * u + c;
    }
    return acc;
}

namespace {

// Gaussian elimination with partial pivoting; a is row-major n x n.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) {
                pivot = r;
            }
        }
        if (a[pivot * n + col] == 0.0) {
            throw std::runtime_error("interpolation system is singular");
        }
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(a[col * n + c], a[pivot * n + c]);
            }
            std::swap(b[col], b[pivot]);
        }
        const double inv = 1.0 / a[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] * inv;
            if (f == 0.0) {
                continue;
            }
            a[r * n + col] = 0.0;
            for (std::size_t c = col + 1; c < n; ++c) {
                a[r * n + c] -= f * a[col * n + c];
            }
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t ri = n; ri-- > 0;) {
        double acc = b[ri];
        for (std::size_t c = ri + 1; c < n; ++c) {
            acc -= a[ri * n + c] * x[c];
        }
        x[ri] = acc / a[ri * n + ri];
    }
    return x;
}

}  // namespace

DistancePolynomial fit_polynomial(const DistanceSeries& series) {
    const std::size_t n = series.times.size();
    if (n < 2 || series.values.size() != n) {
        throw std::invalid_argument("polynomial fit needs >= 2 aligned points");
    }
    if (n > 6) {
        warn("fitting a degree-" + std::to_string(n - 1) +
             " interpolating polynomial; high degrees are numerically fragile");
    }

    DistancePolynomial poly;
    poly.time_origin = series.times.front();
    poly.time_scale = series.times.back() - series.times.front();
    if (!(poly.time_scale > 0.0)) {
        throw std::runtime_error("fitted times must be strictly increasing");
    }

    // Vandermonde system in normalized time, descending powers.
    std::vector<double> vm(n * n);
    std::vector<double> u(n);
    for (std::size_t r = 0; r < n; ++r) {
        u[r] = (series.times[r] - poly.time_origin) / poly.time_scale;
        for (std::size_t c = 0; c < n; ++c) {
            vm[r * n + c] = std::pow(u[r], static_cast<double>(n - 1 - c));
        }
        for (std::size_t prev = 0; prev < r; ++prev) {
            if (u[prev] == u[r]) {
                throw std::runtime_error("fitted times must be distinct");
            }
        }
    }
    poly.coeffs = solve_dense(vm, series.values);

    // One step of iterative refinement keeps the interpolation residual at
    // rounding level even for the higher-degree fits.
    std::vector<double> residual(n);
    for (std::size_t r = 0; r < n; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
            acc += vm[r * n + c] * poly.coeffs[c];
        }
        residual[r] = series.values[r] - acc;
    }
    const std::vector<double> correction = solve_dense(vm, residual);
    for (std::size_t c = 0; c < n; ++c) {
        poly.coeffs[c] += correction[c];
    }
    return poly;
}

ExpirationTime link_expiration_time(const DistancePolynomial& poly, double range,
                                    double eval_start, double horizon_end) {
    if (!(range > 0.0)) {
        throw std::invalid_argument("transmission range must be > 0");
    }
    if (!(horizon_end > eval_start)) {
        throw std::invalid_argument("horizon_end must be after the evaluation start");
    }
    if (poly.evaluate(eval_start) > range) {
        return ExpirationTime::at(0.0);
    }

    // Dense scan at 1/100 of the prediction spacing, then bisection.
    const double window = horizon_end - eval_start;
    const double step = window / (100.0 * static_cast<double>(poly.coeffs.size()));
    double lo = eval_start;
    double hi = lo;
    bool found = false;
    while (hi < horizon_end) {
        hi = std::min(hi + step, horizon_end);
        if (poly.evaluate(hi) > range) {
            found = true;
            break;
        }
        lo = hi;
    }
    if (!found) {
        return ExpirationTime::beyond_horizon();
    }
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        if (poly.evaluate(mid) > range) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return ExpirationTime::at(0.5 * (lo + hi) - eval_start);
}

ExpirationTime link_expiration_time(const DistancePolynomial& poly, double range,
                                    double horizon_end) {
    return link_expiration_time(poly, range, poly.time_origin, horizon_end);
}

ExpirationTime path_expiration_time(const std::vector<ExpirationTime>& link_lets) {
    if (link_lets.empty()) {
        throw std::invalid_argument("path expiration needs at least one link");
    }
    ExpirationTime best = ExpirationTime::beyond_horizon();
    for (const ExpirationTime& let : link_lets) {
        if (let.ordering_key() < best.ordering_key()) {
            best = let;
        }
    }
    return best;
}

namespace {

std::vector<double> tail_window(const std::vector<double>& values, std::size_t end_inclusive,
                                int length) {
    if (end_inclusive + 1 < static_cast<std::size_t>(length)) {
        throw std::invalid_argument("not enough history before the requested sample");
    }
    const std::size_t begin = end_inclusive + 1 - length;
    return {values.begin() + begin, values.begin() + end_inclusive + 1};
}

std::vector<double> predict_coord(const CoordinateModel& model, const std::vector<double>& raw,
                                  std::size_t at_index, int horizon) {
    const int n_input = model.net.config().n_input;
    std::vector<double> history = tail_window(raw, at_index, n_input);
    std::size_t clamped = 0;
    for (double& v : history) {
        v = model.scaler.scale_clamped(v, &clamped);
    }
    if (clamped > 0) {
        info("history contained values outside the scaler range");
    }
    const Prediction pred = predict_multi_step(model.net, history, horizon);
    std::vector<double> out;
    out.reserve(pred.outputs.size());
    for (double s : pred.outputs) {
        out.push_back(model.scaler.unscale(s));
    }
    return out;
}

}  // namespace

PredictedLocations predict_locations(const NodeModel& model, const LocationSeries& series,
                                     std::size_t at_index, int horizon) {
    if (at_index >= series.size()) {
        throw std::invalid_argument("sample index out of range");
    }
    PredictedLocations loc;
    loc.base_time = series.time_at(at_index);
    const std::vector<double> px = predict_coord(model.x, series.x, at_index, horizon);
    const std::vector<double> py = predict_coord(model.y, series.y, at_index, horizon);
    std::vector<double> pz;
    if (series.has_z() && model.z) {
        pz = predict_coord(*model.z, *series.z, at_index, horizon);
    }
    for (int k = 0; k < horizon; ++k) {
        loc.times.push_back(series.time_at(at_index) +
                            static_cast<double>(k + 1) * series.sample_interval);
        loc.points.push_back({px[k], py[k], pz.empty() ? 0.0 : pz[k]});
    }
    return loc;
}

ExpirationTime predicted_let(const NodeModel& model_a, const NodeModel& model_b,
                             const LocationSeries& series_a, const LocationSeries& series_b,
                             std::size_t at_index, double range, int horizon) {
    const double now = series_a.time_at(at_index);
    if (distance(series_a.point(at_index), series_b.point(at_index)) > range) {
        return ExpirationTime::at(0.0);  // already out of range
    }
    const PredictedLocations pa = predict_locations(model_a, series_a, at_index, horizon);
    const PredictedLocations pb = predict_locations(model_b, series_b, at_index, horizon);
    const DistanceSeries d = distances(pa, pb);
    const DistancePolynomial poly = fit_polynomial(d);
    return link_expiration_time(poly, range, now, d.times.back());
}

}  // namespace mobipred
