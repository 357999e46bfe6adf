"""Smoke tests for the python bindings: one pass over every major surface."""

import math

import pytest

import mobipred as mp


def make_params(seed: int) -> "mp.RwmParams":
    params = mp.RwmParams()
    params.v_min = 0.0
    params.v_max = 20.0
    params.pause_max = 30.0
    params.duration = 600.0
    params.rng_seed = seed
    return params


def test_trace_generation_is_deterministic_and_bounded():
    a = mp.generate_rwm_trace(make_params(7))
    b = mp.generate_rwm_trace(make_params(7))
    assert [w.arrival_time for w in a.waypoints] == [w.arrival_time for w in b.waypoints]

    series = mp.sample_trace(a, 10.0, 0.0, 61, "n0")
    assert len(series) == 61
    assert series.time_at(60) == 600.0
    territory = make_params(7).territory
    for i in range(len(series)):
        assert territory.contains(series.point(i))


def test_scaler_round_trip():
    scaler = mp.fit_scaler([0.0, 100.0], margin=0.1)
    assert scaler.scale(0.0) == pytest.approx(0.1)
    assert scaler.scale(100.0) == pytest.approx(0.9)
    assert scaler.unscale(scaler.scale(33.3)) == pytest.approx(33.3, rel=1e-12)


def test_gradient_matches_finite_differences():
    cfg = mp.NetConfig()
    cfg.n_input = 4
    cfg.n_hidden = 3
    cfg.horizon = 3
    cfg.n_feedback = mp.default_feedback(3, 4)
    cfg.rng_seed = 11
    net = mp.RecurrentNet(cfg)
    history = [0.2, 0.4, 0.6, 0.8]
    targets = [0.5, 0.55, 0.6]

    analytic = mp.bptt_gradient(net, history, targets)
    numeric = mp.finite_diff_gradient(net, history, targets, step=1e-6)
    for a, b in zip(analytic.gradient.w_in_hidden, numeric.w_in_hidden):
        assert a == pytest.approx(b, rel=1e-4, abs=1e-7)
    for a, b in zip(analytic.gradient.w_hidden_out, numeric.w_hidden_out):
        assert a == pytest.approx(b, rel=1e-4, abs=1e-7)


def test_training_converges_on_a_ramp():
    n = 100
    ramp = [0.1 + 0.8 * i / (n - 1) for i in range(n)]
    cfg = mp.NetConfig()
    cfg.epochs = 300
    cfg.learning_rate = 0.25
    cfg.rng_seed = 3
    outcome = mp.train_model(ramp, cfg, n)
    curve = outcome.epoch_error
    assert curve[-1] < 0.1 * curve[0]


def test_expiration_pipeline():
    a = mp.PredictedLocations()
    b = mp.PredictedLocations()
    a.base_time = b.base_time = 0.0
    a.times = b.times = [10.0, 20.0, 30.0]
    a.points = [mp.Vec3(0, 0), mp.Vec3(0, 0), mp.Vec3(0, 0)]
    b.points = [mp.Vec3(210, 0), mp.Vec3(220, 0), mp.Vec3(230, 0)]

    dist = mp.distances(a, b)
    assert dist.values == pytest.approx([210.0, 220.0, 230.0])

    poly = mp.fit_polynomial(dist)
    # d(t) = 200 + t crosses 250 at t = 50, beyond the horizon window
    let = mp.link_expiration_time(poly, 250.0, 0.0, 30.0)
    assert let.beyond
    let_low = mp.link_expiration_time(poly, 226.0, 0.0, 30.0)
    assert not let_low.beyond
    assert let_low.seconds == pytest.approx(26.0, abs=1e-3)

    pet = mp.path_expiration_time(
        [mp.ExpirationTime.at(30.0), mp.ExpirationTime.beyond_horizon(), mp.ExpirationTime.at(12.0)]
    )
    assert pet.seconds == 12.0


def test_topology_and_enumeration():
    positions = {
        "a": mp.Vec3(0, 0),
        "b": mp.Vec3(200, 0),
        "c": mp.Vec3(400, 0),
    }
    snap = mp.build_topology(positions, 250.0)
    assert snap.adjacent("a", "b")
    assert not snap.adjacent("a", "c")
    paths = mp.enumerate_paths(snap, "a", "c", 2)
    assert [p.nodes for p in paths] == [["a", "b", "c"]]

    chosen = mp.select_path(paths, mp.Policy.STABLE_PATH, lambda p: mp.ExpirationTime.at(9.0))
    assert chosen.nodes == ["a", "b", "c"]
    assert chosen.pet.seconds == 9.0


def test_fig2_comparison_prefers_the_stable_path():
    scenario = mp.build_fig2_scenario()
    truth = mp.fig2_truth()
    cfg = mp.NetConfig()
    cfg.epochs = 400
    cfg.learning_rate = 0.25
    models = mp.train_scenario_models(scenario, cfg, 7)

    options = mp.RouteSimOptions()
    options.transmission_range = scenario.transmission_range
    options.policies = [mp.Policy.STABLE_PATH, mp.Policy.SHORTEST_HOP]
    stable, shortest = mp.run_comparison(scenario, truth, models, options)

    assert stable.chosen_path == ["A", "C", "D"]
    assert shortest.chosen_path == ["A", "B", "D"]
    assert stable.realized_lifetime > shortest.realized_lifetime


def test_file_round_trips(tmp_path):
    trace = mp.generate_rwm_trace(make_params(21))
    series = mp.sample_trace(trace, 10.0, 0.0, 31, "n0")
    path = tmp_path / "trace.csv"
    mp.write_trace_csv(path, [series])
    loaded = mp.read_series(path, "n0")
    assert loaded.x == pytest.approx(series.x, abs=0.0)

    cfg = mp.NetConfig()
    cfg.epochs = 10
    cfg.rng_seed = 5
    outcome = mp.train_model(series.x, cfg, 20)
    model_path = tmp_path / "model.json"
    mp.save_model(model_path, outcome.model, "n0", "x")
    reloaded = mp.load_model(model_path)
    assert reloaded.net.w_hidden_out == pytest.approx(outcome.model.net.w_hidden_out, abs=0.0)
