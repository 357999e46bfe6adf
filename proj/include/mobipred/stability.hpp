#pragma once

#include <limits>
#include <string>
#include <vector>

#include "mobipred/mobility.hpp"
#include "mobipred/predictor.hpp"

namespace mobipred {

/// Seconds until a link or path is predicted to break, or "beyond horizon"
/// when no break is visible inside the prediction window.
struct ExpirationTime {
    double value = std::numeric_limits<double>::infinity();
    bool beyond = true;

    static ExpirationTime beyond_horizon() { return {}; }
    static ExpirationTime at(double seconds) { return {seconds, false}; }

    bool is_beyond() const { return beyond; }
    double seconds() const { return value; }

    /// Ordering with beyond-horizon treated as +infinity.
    double ordering_key() const { return beyond ? std::numeric_limits<double>::infinity() : value; }

    friend bool operator==(const ExpirationTime& a, const ExpirationTime& b) {
        return a.beyond == b.beyond && (a.beyond || a.value == b.value);
    }
};

std::string to_string(const ExpirationTime& et);

/// Per-node predicted future locations on a shared time grid.
struct PredictedLocations {
    double base_time = 0.0;      // time the prediction was made
    std::vector<double> times;   // strictly increasing, first > base_time
    std::vector<Vec3> points;
};

/// Inter-node distances time point by time point.
struct DistanceSeries {
    double base_time = 0.0;
    std::vector<double> times;
    std::vector<double> values;  // meters
};

/// Euclidean distance per time point; throws std::invalid_argument when the
/// two location sets are misaligned.
DistanceSeries distances(const PredictedLocations& a, const PredictedLocations& b);

/// Interpolating polynomial through the fitted distances, stored in
/// normalized time u = (t - time_origin) / time_scale for conditioning.
/// Coefficients are in descending powers of u.
struct DistancePolynomial {
    std::vector<double> coeffs;
    double time_origin = 0.0;  // first fitted time
    double time_scale = 1.0;

    double evaluate(double t) const;
};

/// Solves the interpolation system through all points of the series
/// (degree N-1 through N points). Throws std::runtime_error when the times
/// are not distinct.
DistancePolynomial fit_polynomial(const DistanceSeries& series);

/// First time in (eval_start, horizon_end] at which the polynomial crosses
/// `range` from below, located by a dense scan plus bisection to 1e-6 s.
/// Returns 0 when the polynomial already exceeds the range at eval_start and
/// beyond-horizon when no upward crossing exists in the window. The result
/// counts seconds since eval_start.
ExpirationTime link_expiration_time(const DistancePolynomial& poly, double range,
                                    double eval_start, double horizon_end);

/// Convenience overload scanning from the first fitted time.
ExpirationTime link_expiration_time(const DistancePolynomial& poly, double range,
                                    double horizon_end);

/// Path expiration = minimum link expiration, beyond-horizon acting as
/// +infinity. Throws std::invalid_argument on an empty list.
ExpirationTime path_expiration_time(const std::vector<ExpirationTime>& link_lets);

/// Predicts both nodes' next `horizon` locations with their trained nets,
/// fits the distance polynomial and extracts the link expiration time,
/// counted from the sample at `at_index`. Returns 0 when the nodes are
/// already out of range at that sample.
ExpirationTime predicted_let(const NodeModel& model_a, const NodeModel& model_b,
                             const LocationSeries& series_a, const LocationSeries& series_b,
                             std::size_t at_index, double range, int horizon);

/// The multi-step location forecast backing predicted_let, exposed for the
/// trajectory outputs.
PredictedLocations predict_locations(const NodeModel& model, const LocationSeries& series,
                                     std::size_t at_index, int horizon);

}  // namespace mobipred
