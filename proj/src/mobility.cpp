#include "mobipred/mobility.hpp"

#include <algorithm>
#include <stdexcept>

#include "mobipred/rng.hpp"

namespace mobipred {

bool Territory::contains(const Vec3& p) const {
    if (p.x < x_min || p.x > x_max || p.y < y_min || p.y > y_max) {
        return false;
    }
    if (is_3d() && (p.z < *z_min || p.z > *z_max)) {
        return false;
    }
    return true;
}

void Territory::validate() const {
    if (!(x_min < x_max) || !(y_min < y_max)) {
        throw std::invalid_argument("territory bounds must satisfy min < max");
    }
    if (z_min.has_value() != z_max.has_value()) {
        throw std::invalid_argument("territory z bounds must be given together");
    }
    if (is_3d() && !(*z_min < *z_max)) {
        throw std::invalid_argument("territory bounds must satisfy min < max");
    }
}

void RwmParams::validate() const {
    territory.validate();
    if (v_min < 0.0 || v_max < v_min) {
        throw std::invalid_argument("speed interval must satisfy 0 <= v_min <= v_max");
    }
    if (pause_max < 0.0) {
        throw std::invalid_argument("pause_max must be >= 0");
    }
    if (!(duration > 0.0)) {
        throw std::invalid_argument("duration must be > 0");
    }
}

Vec3 ContinuousTrace::position_at(double t) const {
    t = std::clamp(t, 0.0, duration);
    // Find the last waypoint reached by time t.
    std::size_t i = 0;
    while (i + 1 < waypoints.size() && waypoints[i + 1].arrival_time <= t) {
        ++i;
    }
    const Waypoint& cur = waypoints[i];
    if (i + 1 == waypoints.size()) {
        return cur.position;
    }
    const double depart = cur.arrival_time + cur.pause;
    if (t <= depart) {
        return cur.position;
    }
    const Waypoint& next = waypoints[i + 1];
    const double travel = next.arrival_time - depart;
    const Vec3 velocity = (1.0 / travel) * (next.position - cur.position);
    return cur.position + (t - depart) * velocity;
}

const std::vector<double>& LocationSeries::coord(char axis) const {
    switch (axis) {
        case 'x': return x;
        case 'y': return y;
        case 'z':
            if (!z) throw std::invalid_argument("series has no z coordinate");
            return *z;
        default: throw std::invalid_argument("coordinate must be x, y or z");
    }
}

void LocationSeries::validate() const {
    if (x.empty() || x.size() != y.size() || (z && z->size() != x.size())) {
        throw std::invalid_argument("series coordinates must have equal nonzero length");
    }
    if (!(sample_interval > 0.0)) {
        throw std::invalid_argument("sample_interval must be > 0");
    }
}

void Scenario::validate() const {
    if (source == destination) {
        throw std::invalid_argument("scenario source and destination must differ");
    }
    if (!nodes.count(source) || !nodes.count(destination)) {
        throw std::invalid_argument("scenario source/destination must name nodes");
    }
    std::size_t len = 0;
    for (const auto& [id, series] : nodes) {
        series.validate();
        if (len == 0) {
            len = series.size();
        }
        const auto& first = nodes.begin()->second;
        if (series.size() != len || series.sample_interval != first.sample_interval ||
            series.start_time != first.start_time) {
            throw std::invalid_argument("scenario series must share grid and length");
        }
    }
    if (!(transmission_range > 0.0)) {
        throw std::invalid_argument("transmission_range must be > 0");
    }
}

namespace {

Vec3 draw_point(Rng& rng, const Territory& t) {
    Vec3 p;
    p.x = rng.uniform(t.x_min, t.x_max);
    p.y = rng.uniform(t.y_min, t.y_max);
    if (t.is_3d()) {
        p.z = rng.uniform(*t.z_min, *t.z_max);
    }
    return p;
}

}  // namespace

ContinuousTrace generate_rwm_trace(const RwmParams& params) {
    params.validate();

    Rng rng(params.rng_seed);
    ContinuousTrace trace;
    trace.duration = params.duration;
    trace.has_z = params.territory.is_3d();

    const Vec3 start = draw_point(rng, params.territory);
    if (params.v_max <= 0.0) {
        // Zero speed: the node can never complete a leg, so it stays put.
        trace.waypoints.push_back({0.0, start, 0.0, params.duration});
        return trace;
    }

    double initial_pause = rng.uniform(0.0, params.pause_max);
    initial_pause = std::min(initial_pause, params.duration);
    trace.waypoints.push_back({0.0, start, 0.0, initial_pause});

    Vec3 pos = start;
    double t = initial_pause;
    while (t < params.duration) {
        Vec3 dest = draw_point(rng, params.territory);
        double dist = distance(pos, dest);
        while (dist == 0.0) {
            dest = draw_point(rng, params.territory);
            dist = distance(pos, dest);
        }
        double speed = rng.uniform(params.v_min, params.v_max);
        while (speed <= 0.0) {
            speed = rng.uniform(params.v_min, params.v_max);
        }
        const double arrival = t + dist / speed;
        if (arrival >= params.duration) {
            // Cut the final leg at the duration boundary.
            const double travel = dist / speed;
            const Vec3 velocity = (1.0 / travel) * (dest - pos);
            const Vec3 cut = pos + (params.duration - t) * velocity;
            trace.waypoints.push_back({params.duration, cut, speed, 0.0});
            break;
        }
        double pause = rng.uniform(0.0, params.pause_max);
        pause = std::min(pause, params.duration - arrival);
        trace.waypoints.push_back({arrival, dest, speed, pause});
        pos = dest;
        t = arrival + pause;
    }
    return trace;
}

LocationSeries sample_trace(const ContinuousTrace& trace, double interval, double start,
                            std::size_t count, std::string node_id) {
    if (!(interval > 0.0) || count == 0) {
        throw std::invalid_argument("sample interval and count must be positive");
    }
    const double last = start + static_cast<double>(count - 1) * interval;
    if (start < 0.0 || last > trace.duration + 1e-9) {
        throw std::out_of_range("sampling window exceeds trace duration");
    }

    LocationSeries series;
    series.node_id = std::move(node_id);
    series.sample_interval = interval;
    series.start_time = start;
    series.x.reserve(count);
    series.y.reserve(count);
    if (trace.has_z) {
        series.z.emplace();
        series.z->reserve(count);
    }
    for (std::size_t i = 0; i < count; ++i) {
        const Vec3 p = trace.position_at(series.time_at(i));
        series.x.push_back(p.x);
        series.y.push_back(p.y);
        if (trace.has_z) {
            series.z->push_back(p.z);
        }
    }
    return series;
}

ContinuousTrace series_to_trace(const LocationSeries& series) {
    series.validate();
    ContinuousTrace trace;
    trace.has_z = series.has_z();
    trace.duration = series.time_at(series.size() - 1) - series.start_time;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double t = series.time_at(i) - series.start_time;
        Vec3 p = series.point(i);
        double speed = 0.0;
        if (i > 0) {
            speed = distance(series.point(i - 1), p) / series.sample_interval;
        }
        trace.waypoints.push_back({t, p, speed, 0.0});
    }
    return trace;
}

namespace fig2 {

Vec3 velocity_c() {
    const Vec3 towards_a = kPosA - kPosC;
    return (kSpeedC / norm(towards_a)) * towards_a;
}

std::optional<double> crossing_time(const Vec3& p_u, const Vec3& v_u, const Vec3& p_v,
                                    const Vec3& v_v, double range) {
    // |dp + dv t|^2 = range^2 is quadratic in t; the break is the first
    // root with the distance increasing through the range.
    const Vec3 dp = p_u - p_v;
    const Vec3 dv = v_u - v_v;
    const double a = dv.x * dv.x + dv.y * dv.y + dv.z * dv.z;
    const double b = 2.0 * (dp.x * dv.x + dp.y * dv.y + dp.z * dv.z);
    const double c = dp.x * dp.x + dp.y * dp.y + dp.z * dp.z - range * range;
    if (a == 0.0) {
        if (b <= 0.0 || c > 0.0) {
            return std::nullopt;  // static or already outside: no upward crossing from inside
        }
        return -c / b;
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) {
        return std::nullopt;
    }
    const double root = (-b + std::sqrt(disc)) / (2.0 * a);  // distance increasing here
    return root >= 0.0 ? std::optional<double>(root) : std::nullopt;
}

}  // namespace fig2

std::map<std::string, ContinuousTrace> fig2_truth() {
    using namespace fig2;
    auto linear = [](const Vec3& p0, const Vec3& v) {
        ContinuousTrace trace;
        trace.duration = kDuration;
        const double speed = norm(v);
        if (speed == 0.0) {
            trace.waypoints.push_back({0.0, p0, 0.0, kDuration});
        } else {
            trace.waypoints.push_back({0.0, p0, 0.0, 0.0});
            trace.waypoints.push_back({kDuration, p0 + kDuration * v, speed, 0.0});
        }
        return trace;
    };
    std::map<std::string, ContinuousTrace> truth;
    truth["A"] = linear(kPosA, {0.0, 0.0, 0.0});
    truth["B"] = linear(kPosB, kVelB);
    truth["C"] = linear(kPosC, velocity_c());
    truth["D"] = linear(kPosD, {0.0, 0.0, 0.0});
    return truth;
}

Scenario build_fig2_scenario() {
    using namespace fig2;
    Scenario scenario;
    scenario.source = "A";
    scenario.destination = "D";
    scenario.transmission_range = kRange;
    scenario.sample_interval = kInterval;
    const auto count = static_cast<std::size_t>(kDuration / kInterval) + 1;
    for (const auto& [id, trace] : fig2_truth()) {
        scenario.nodes[id] = sample_trace(trace, kInterval, 0.0, count, id);
    }
    scenario.validate();
    return scenario;
}

}  // namespace mobipred
