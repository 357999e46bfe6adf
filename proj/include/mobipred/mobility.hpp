#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mobipred {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
    friend bool operator==(const Vec3& a, const Vec3& b) = default;
};

inline double norm(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

/// Rectangular (optionally boxed) region a node is allowed to move in.
struct Territory {
    double x_min = 0.0;
    double x_max = 1000.0;
    double y_min = 0.0;
    double y_max = 1000.0;
    std::optional<double> z_min;
    std::optional<double> z_max;

    bool is_3d() const { return z_min.has_value() && z_max.has_value(); }
    bool contains(const Vec3& p) const;
    void validate() const;
};

/// Random Waypoint generation parameters.
struct RwmParams {
    Territory territory;
    double v_min = 0.0;        // m/s
    double v_max = 20.0;       // m/s
    double pause_max = 60.0;   // s, pause drawn uniformly in [0, pause_max]
    double duration = 4000.0;  // s
    std::uint64_t rng_seed = 1;

    void validate() const;
};

/// One stop of a piecewise-linear trajectory: the node arrives at `position`
/// at `arrival_time` (travelling at `leg_speed`), pauses for `pause` seconds,
/// then heads for the next waypoint.
struct Waypoint {
    double arrival_time = 0.0;
    Vec3 position;
    double leg_speed = 0.0;  // 0 for the initial placement
    double pause = 0.0;
};

/// Exact continuous-time trajectory over [0, duration].
struct ContinuousTrace {
    std::vector<Waypoint> waypoints;
    double duration = 0.0;
    bool has_z = false;

    /// Position by exact linear interpolation along the active leg (the held
    /// position during pauses). t is clamped to [0, duration].
    Vec3 position_at(double t) const;
};

/// Uniformly sampled coordinate time series for one node.
struct LocationSeries {
    std::string node_id;
    double sample_interval = 10.0;
    double start_time = 0.0;
    std::vector<double> x;
    std::vector<double> y;
    std::optional<std::vector<double>> z;

    std::size_t size() const { return x.size(); }
    bool has_z() const { return z.has_value(); }
    double time_at(std::size_t i) const { return start_time + static_cast<double>(i) * sample_interval; }
    Vec3 point(std::size_t i) const {
        return {x[i], y[i], z ? (*z)[i] : 0.0};
    }
    const std::vector<double>& coord(char axis) const;
    void validate() const;
};

/// A set of node series plus the routing endpoints driving a simulation.
struct Scenario {
    std::map<std::string, LocationSeries> nodes;
    std::string source;
    std::string destination;
    double transmission_range = 250.0;
    double sample_interval = 10.0;

    void validate() const;
};

/// Generates a Random Waypoint trajectory. Destinations are drawn uniformly
/// in the territory, leg speeds uniformly in [v_min, v_max] (zero draws are
/// rejected; v_max == 0 yields a permanently stationary node), pauses
/// uniformly in [0, pause_max]. Deterministic for a fixed seed.
ContinuousTrace generate_rwm_trace(const RwmParams& params);

/// Samples `count` positions at start, start+interval, ... Throws
/// std::out_of_range if the window exceeds the trace duration.
LocationSeries sample_trace(const ContinuousTrace& trace, double interval, double start,
                            std::size_t count, std::string node_id = "n0");

/// Piecewise-linear trajectory through the samples of a series. For motion
/// that is linear between samples this reproduces the original trace.
ContinuousTrace series_to_trace(const LocationSeries& series);

/// Committed constants of the four-node example scenario: A static source,
/// D static destination, B crossing the 250 m boundary of both A and D at
/// t = 85 s, C drifting slowly towards A. All speeds in m/s.
namespace fig2 {
inline constexpr double kRange = 250.0;
inline constexpr double kInterval = 10.0;
inline constexpr double kDuration = 500.0;
inline constexpr Vec3 kPosA{0.0, 0.0, 0.0};
inline constexpr Vec3 kPosD{400.0, 0.0, 0.0};
inline constexpr Vec3 kPosB{200.0, 31.0, 0.0};
inline constexpr Vec3 kVelB{0.0, 1.4, 0.0};
inline constexpr Vec3 kPosC{200.0, -80.0, 0.0};
inline constexpr double kSpeedC = 0.1;  // direction: towards A

Vec3 velocity_c();

/// Closed-form first time |pos_u(t) - pos_v(t)| = kRange for two nodes in
/// uniform linear motion; nullopt when the distance never reaches the range.
std::optional<double> crossing_time(const Vec3& p_u, const Vec3& v_u, const Vec3& p_v,
                                    const Vec3& v_v, double range);
}  // namespace fig2

/// The scenario sampled on the fig2 constants; A is the source, D the
/// destination.
Scenario build_fig2_scenario();

/// Exact continuous trajectories behind build_fig2_scenario().
std::map<std::string, ContinuousTrace> fig2_truth();

}  // namespace mobipred
