#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "mobipred/mobility.hpp"
#include "mobipred/rng.hpp"

using namespace mobipred;

namespace {

RwmParams desk_params(std::uint64_t seed) {
    RwmParams p;
    p.territory = Territory{0.0, 1000.0, 0.0, 1000.0, {}, {}};
    p.v_min = 0.0;
    p.v_max = 20.0;
    p.pause_max = 60.0;
    p.duration = 4000.0;
    p.rng_seed = seed;
    return p;
}

}  // namespace

TEST_CASE("zero speed keeps the node at its start position") {
    RwmParams p = desk_params(4);
    p.v_min = 0.0;
    p.v_max = 0.0;
    p.duration = 100.0;
    const ContinuousTrace trace = generate_rwm_trace(p);
    const Vec3 start = trace.position_at(0.0);
    for (double t : {0.0, 10.0, 55.5, 100.0}) {
        CHECK(trace.position_at(t) == start);
    }
    const LocationSeries s = sample_trace(trace, 10.0, 0.0, 11);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s.x[i] == start.x);
        CHECK(s.y[i] == start.y);
    }
}

TEST_CASE("identical seeds reproduce the trace bit-exactly") {
    const ContinuousTrace a = generate_rwm_trace(desk_params(909));
    const ContinuousTrace b = generate_rwm_trace(desk_params(909));
    REQUIRE(a.waypoints.size() == b.waypoints.size());
    for (std::size_t i = 0; i < a.waypoints.size(); ++i) {
        CHECK(a.waypoints[i].arrival_time == b.waypoints[i].arrival_time);
        CHECK(a.waypoints[i].position == b.waypoints[i].position);
        CHECK(a.waypoints[i].leg_speed == b.waypoints[i].leg_speed);
        CHECK(a.waypoints[i].pause == b.waypoints[i].pause);
    }
}

TEST_CASE("different seeds give different first waypoints") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const ContinuousTrace a = generate_rwm_trace(desk_params(seed));
        const ContinuousTrace b = generate_rwm_trace(desk_params(seed + 1000));
        CHECK(a.waypoints.front().position != b.waypoints.front().position);
    }
}

TEST_CASE("every waypoint and sample stays inside the territory") {
    const RwmParams p = desk_params(77);
    const ContinuousTrace trace = generate_rwm_trace(p);
    for (const Waypoint& wp : trace.waypoints) {
        CHECK(p.territory.contains(wp.position));
        CHECK(wp.leg_speed >= 0.0);
        CHECK(wp.leg_speed <= p.v_max);
    }
    const LocationSeries s = sample_trace(trace, 10.0, 0.0, 401);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(p.territory.contains(s.point(i)));
        if (i > 0) {
            // displacement bounded by v_max * interval
            CHECK(distance(s.point(i - 1), s.point(i)) <= p.v_max * 10.0 + 1e-9);
        }
    }
}

TEST_CASE("leg speeds are strictly positive draws from [v_min, v_max]") {
    RwmParams p = desk_params(31);
    p.v_min = 0.0;  // zero draws are rejected, not used
    const ContinuousTrace trace = generate_rwm_trace(p);
    REQUIRE(trace.waypoints.size() > 1);
    for (std::size_t i = 1; i < trace.waypoints.size(); ++i) {
        CHECK(trace.waypoints[i].leg_speed > 0.0);
        CHECK(trace.waypoints[i].leg_speed <= 20.0);
    }
}

TEST_CASE("3d territories draw and keep z coordinates") {
    RwmParams p = desk_params(8);
    p.territory.z_min = 0.0;
    p.territory.z_max = 150.0;
    const ContinuousTrace trace = generate_rwm_trace(p);
    CHECK(trace.has_z);
    const LocationSeries s = sample_trace(trace, 10.0, 0.0, 100);
    REQUIRE(s.has_z());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK((*s.z)[i] >= 0.0);
        CHECK((*s.z)[i] <= 150.0);
    }
}

TEST_CASE("sampling covers 0..4000 at 10 s in 401 points") {
    const ContinuousTrace trace = generate_rwm_trace(desk_params(5));
    const LocationSeries s = sample_trace(trace, 10.0, 0.0, 401);
    CHECK(s.size() == 401);
    CHECK(s.time_at(0) == 0.0);
    CHECK(s.time_at(400) == 4000.0);
    CHECK_THROWS_AS(sample_trace(trace, 10.0, 0.0, 402), std::out_of_range);
}

TEST_CASE("a single straight leg samples exactly on the line") {
    ContinuousTrace trace;
    trace.duration = 100.0;
    trace.waypoints.push_back({0.0, {0.0, 0.0, 0.0}, 0.0, 0.0});
    trace.waypoints.push_back({100.0, {1000.0, 0.0, 0.0}, 10.0, 0.0});
    const LocationSeries s = sample_trace(trace, 1.0, 0.0, 101);
    for (std::size_t k = 0; k < s.size(); ++k) {
        CHECK(s.x[k] == 10.0 * static_cast<double>(k));
        CHECK(s.y[k] == 0.0);
    }
}

TEST_CASE("pauses hold the node still before the next leg") {
    ContinuousTrace trace;
    trace.duration = 30.0;
    trace.waypoints.push_back({0.0, {0.0, 0.0, 0.0}, 0.0, 10.0});
    trace.waypoints.push_back({20.0, {100.0, 0.0, 0.0}, 10.0, 10.0});
    CHECK(trace.position_at(5.0) == Vec3{0.0, 0.0, 0.0});
    CHECK(trace.position_at(10.0) == Vec3{0.0, 0.0, 0.0});
    CHECK(trace.position_at(15.0) == Vec3{50.0, 0.0, 0.0});
    CHECK(trace.position_at(25.0) == Vec3{100.0, 0.0, 0.0});
}

TEST_CASE("fine resampling then decimation reproduces coarse samples bit-exactly") {
    const ContinuousTrace trace = generate_rwm_trace(desk_params(321));
    const LocationSeries coarse = sample_trace(trace, 10.0, 0.0, 101);
    const LocationSeries fine = sample_trace(trace, 1.0, 0.0, 1001);
    for (std::size_t k = 0; k < coarse.size(); ++k) {
        CHECK(coarse.x[k] == fine.x[10 * k]);
        CHECK(coarse.y[k] == fine.y[10 * k]);
    }
}

TEST_CASE("fig2 scenario starts with both candidate paths alive") {
    const Scenario sc = build_fig2_scenario();
    REQUIRE(sc.nodes.size() == 4);
    CHECK(sc.source == "A");
    CHECK(sc.destination == "D");
    CHECK(sc.transmission_range == 250.0);

    const auto at0 = [&](const std::string& id) { return sc.nodes.at(id).point(0); };
    CHECK(distance(at0("A"), at0("B")) <= 250.0);
    CHECK(distance(at0("B"), at0("D")) <= 250.0);
    CHECK(distance(at0("A"), at0("C")) <= 250.0);
    CHECK(distance(at0("C"), at0("D")) <= 250.0);
    CHECK(distance(at0("A"), at0("D")) > 250.0);
}

TEST_CASE("fig2 link (A,C) outlives link (A,B)") {
    using namespace fig2;
    const auto ab = crossing_time(kPosA, {0, 0, 0}, kPosB, kVelB, kRange);
    REQUIRE(ab.has_value());
    CHECK(*ab == doctest::Approx(85.0).epsilon(1e-12));

    // C closes in on A; within the scenario window the distance shrinks,
    // so any crossing lies far beyond the (A,B) break.
    const auto ac = crossing_time(kPosA, {0, 0, 0}, kPosC, velocity_c(), kRange);
    if (ac.has_value()) {
        CHECK(*ac > kDuration);
        CHECK(*ac > *ab);
    }
}

TEST_CASE("fig2 samples agree with the continuous truth") {
    const Scenario sc = build_fig2_scenario();
    const auto truth = fig2_truth();
    for (const auto& [id, series] : sc.nodes) {
        for (std::size_t i = 0; i < series.size(); i += 7) {
            const Vec3 p = truth.at(id).position_at(series.time_at(i));
            CHECK(series.x[i] == doctest::Approx(p.x).epsilon(1e-12));
            CHECK(series.y[i] == doctest::Approx(p.y).epsilon(1e-12));
        }
    }
}

TEST_CASE("series_to_trace reproduces linear motion exactly between samples") {
    const auto truth = fig2_truth();
    const Scenario sc = build_fig2_scenario();
    const ContinuousTrace rebuilt = series_to_trace(sc.nodes.at("B"));
    for (double t : {0.0, 12.5, 97.0, 333.3, 500.0}) {
        CHECK(distance(rebuilt.position_at(t), truth.at("B").position_at(t)) < 1e-9);
    }
}

TEST_CASE("invalid parameters are rejected") {
    RwmParams p = desk_params(1);
    p.v_min = 5.0;
    p.v_max = 2.0;
    CHECK_THROWS_AS(generate_rwm_trace(p), std::invalid_argument);

    RwmParams q = desk_params(1);
    q.duration = 0.0;
    CHECK_THROWS_AS(generate_rwm_trace(q), std::invalid_argument);

    Territory t{10.0, 0.0, 0.0, 1.0, {}, {}};
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}
