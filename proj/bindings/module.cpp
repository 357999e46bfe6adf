// Python bindings for the core operations: mobility trace generation,
// recurrent predictors, expiration times and routing comparison.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mobipred/io.hpp"
#include "mobipred/mobility.hpp"
#include "mobipred/pipeline.hpp"
#include "mobipred/predictor.hpp"
#include "mobipred/rng.hpp"
#include "mobipred/routing.hpp"
#include "mobipred/stability.hpp"

namespace py = pybind11;
using namespace mobipred;

namespace {

void bind_mobility(py::module_& m) {
    py::class_<Vec3>(m, "Vec3")
        .def(py::init<>())
        .def(py::init([](double x, double y, double z) { return Vec3{x, y, z}; }), py::arg("x"),
             py::arg("y"), py::arg("z") = 0.0)
        .def_readwrite("x", &Vec3::x)
        .def_readwrite("y", &Vec3::y)
        .def_readwrite("z", &Vec3::z)
        .def("__repr__", [](const Vec3& v) {
            return "Vec3(" + format_double(v.x) + ", " + format_double(v.y) + ", " +
                   format_double(v.z) + ")";
        });
    m.def("distance", &distance, py::arg("a"), py::arg("b"));

    py::class_<Territory>(m, "Territory")
        .def(py::init<>())
        .def_readwrite("x_min", &Territory::x_min)
        .def_readwrite("x_max", &Territory::x_max)
        .def_readwrite("y_min", &Territory::y_min)
        .def_readwrite("y_max", &Territory::y_max)
        .def_readwrite("z_min", &Territory::z_min)
        .def_readwrite("z_max", &Territory::z_max)
        .def("contains", &Territory::contains)
        .def("is_3d", &Territory::is_3d);

    py::class_<RwmParams>(m, "RwmParams")
        .def(py::init<>())
        .def_readwrite("territory", &RwmParams::territory)
        .def_readwrite("v_min", &RwmParams::v_min)
        .def_readwrite("v_max", &RwmParams::v_max)
        .def_readwrite("pause_max", &RwmParams::pause_max)
        .def_readwrite("duration", &RwmParams::duration)
        .def_readwrite("rng_seed", &RwmParams::rng_seed);

    py::class_<Waypoint>(m, "Waypoint")
        .def_readonly("arrival_time", &Waypoint::arrival_time)
        .def_readonly("position", &Waypoint::position)
        .def_readonly("leg_speed", &Waypoint::leg_speed)
        .def_readonly("pause", &Waypoint::pause);

    py::class_<ContinuousTrace>(m, "ContinuousTrace")
        .def_readonly("waypoints", &ContinuousTrace::waypoints)
        .def_readonly("duration", &ContinuousTrace::duration)
        .def_readonly("has_z", &ContinuousTrace::has_z)
        .def("position_at", &ContinuousTrace::position_at, py::arg("t"));

    py::class_<LocationSeries>(m, "LocationSeries")
        .def(py::init<>())
        .def_readwrite("node_id", &LocationSeries::node_id)
        .def_readwrite("sample_interval", &LocationSeries::sample_interval)
        .def_readwrite("start_time", &LocationSeries::start_time)
        .def_readwrite("x", &LocationSeries::x)
        .def_readwrite("y", &LocationSeries::y)
        .def_readwrite("z", &LocationSeries::z)
        .def("__len__", &LocationSeries::size)
        .def("time_at", &LocationSeries::time_at, py::arg("index"))
        .def("point", &LocationSeries::point, py::arg("index"));

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("nodes", &Scenario::nodes)
        .def_readwrite("source", &Scenario::source)
        .def_readwrite("destination", &Scenario::destination)
        .def_readwrite("transmission_range", &Scenario::transmission_range)
        .def_readwrite("sample_interval", &Scenario::sample_interval);

    m.def("generate_rwm_trace", &generate_rwm_trace, py::arg("params"),
          "Random Waypoint trajectory, deterministic for a fixed seed.");
    m.def("sample_trace", &sample_trace, py::arg("trace"), py::arg("interval"), py::arg("start"),
          py::arg("count"), py::arg("node_id") = "n0");
    m.def("series_to_trace", &series_to_trace, py::arg("series"));
    m.def("build_fig2_scenario", &build_fig2_scenario);
    m.def("fig2_truth", &fig2_truth);
    m.def("derive_seed", [](std::uint64_t base, const std::string& component) {
        return derive_seed(base, component);
    });
}

void bind_predictor(py::module_& m) {
    py::class_<NetConfig>(m, "NetConfig")
        .def(py::init<>())
        .def_readwrite("n_input", &NetConfig::n_input)
        .def_readwrite("n_hidden", &NetConfig::n_hidden)
        .def_readwrite("n_feedback", &NetConfig::n_feedback)
        .def_readwrite("horizon", &NetConfig::horizon)
        .def_readwrite("learning_rate", &NetConfig::learning_rate)
        .def_readwrite("epochs", &NetConfig::epochs)
        .def_readwrite("rng_seed", &NetConfig::rng_seed);
    m.def("default_feedback", &default_feedback, py::arg("horizon"), py::arg("n_input"));
    m.def("sigmoid", &sigmoid, py::arg("x"));

    py::class_<Scaler>(m, "Scaler")
        .def(py::init<>())
        .def_readwrite("gain", &Scaler::gain)
        .def_readwrite("offset", &Scaler::offset)
        .def("scale", &Scaler::scale)
        .def("unscale", &Scaler::unscale)
        .def("scale_clamped",
             [](const Scaler& s, double v) { return s.scale_clamped(v, nullptr); })
        .def("scale_all", [](const Scaler& s, const std::vector<double>& v) {
            return s.scale_all(v);
        });
    m.def(
        "fit_scaler",
        [](const std::vector<double>& values, double margin) {
            return fit_scaler(values, margin);
        },
        py::arg("values"), py::arg("margin") = 0.1);

    py::class_<ForwardStep>(m, "ForwardStep")
        .def_readonly("input", &ForwardStep::input)
        .def_readonly("hidden_pre", &ForwardStep::hidden_pre)
        .def_readonly("hidden_act", &ForwardStep::hidden_act)
        .def_readonly("out_pre", &ForwardStep::out_pre)
        .def_readonly("output", &ForwardStep::output);
    py::class_<ForwardTrace>(m, "ForwardTrace").def_readonly("steps", &ForwardTrace::steps);

    py::class_<RecurrentNet>(m, "RecurrentNet")
        .def(py::init<const NetConfig&>(), py::arg("config"))
        .def(py::init<const NetConfig&, std::vector<double>, std::vector<double>>(),
             py::arg("config"), py::arg("w_in_hidden"), py::arg("w_hidden_out"))
        .def_property_readonly("config", &RecurrentNet::config)
        .def_property_readonly(
            "w_in_hidden",
            [](const RecurrentNet& n) { return n.w_in_hidden(); })
        .def_property_readonly(
            "w_hidden_out",
            [](const RecurrentNet& n) { return n.w_hidden_out(); });

    m.def(
        "forward_one",
        [](const RecurrentNet& net, const std::vector<double>& input) {
            return forward_one(net, input);
        },
        py::arg("net"), py::arg("input"));

    py::class_<Prediction>(m, "Prediction")
        .def_readonly("outputs", &Prediction::outputs)
        .def_readonly("trace", &Prediction::trace);
    m.def(
        "predict_multi_step",
        [](const RecurrentNet& net, const std::vector<double>& history, int horizon) {
            return predict_multi_step(net, history, horizon);
        },
        py::arg("net"), py::arg("history"), py::arg("horizon"));

    py::class_<Gradient>(m, "Gradient")
        .def_readonly("w_in_hidden", &Gradient::w_in_hidden)
        .def_readonly("w_hidden_out", &Gradient::w_hidden_out);
    py::class_<GradientResult>(m, "GradientResult")
        .def_readonly("gradient", &GradientResult::gradient)
        .def_readonly("loss", &GradientResult::loss);
    m.def(
        "bptt_gradient",
        [](const RecurrentNet& net, const std::vector<double>& history,
           const std::vector<double>& targets) { return bptt_gradient(net, history, targets); },
        py::arg("net"), py::arg("history"), py::arg("targets"));
    m.def(
        "finite_diff_gradient",
        [](const RecurrentNet& net, const std::vector<double>& history,
           const std::vector<double>& targets, double step) {
            return finite_diff_gradient(net, history, targets, step);
        },
        py::arg("net"), py::arg("history"), py::arg("targets"), py::arg("step") = 1e-6);

    m.def(
        "train_epoch",
        [](RecurrentNet& net, const std::vector<double>& scaled) {
            return train_epoch(net, scaled);
        },
        py::arg("net"), py::arg("scaled"));
    m.def(
        "train",
        [](RecurrentNet& net, const std::vector<double>& scaled) { return train(net, scaled); },
        py::arg("net"), py::arg("scaled"));

    py::class_<EvalResult>(m, "EvalResult")
        .def_readonly("e_train", &EvalResult::e_train)
        .def_readonly("e_gener", &EvalResult::e_gener);
    m.def(
        "evaluate",
        [](const RecurrentNet& net, const std::vector<double>& scaled, std::size_t split) {
            return evaluate(net, scaled, split);
        },
        py::arg("net"), py::arg("scaled"), py::arg("split"));
    m.def(
        "persistence_error",
        [](const std::vector<double>& segment, int n_input, int horizon) {
            return persistence_error(segment, n_input, horizon);
        },
        py::arg("segment"), py::arg("n_input"), py::arg("horizon"));

    py::class_<CoordinateModel>(m, "CoordinateModel")
        .def(py::init([](RecurrentNet net, Scaler scaler) {
                 return CoordinateModel{std::move(net), scaler};
             }),
             py::arg("net"), py::arg("scaler"))
        .def_readwrite("net", &CoordinateModel::net)
        .def_readwrite("scaler", &CoordinateModel::scaler);
    py::class_<NodeModel>(m, "NodeModel")
        .def(py::init([](CoordinateModel x, CoordinateModel y,
                         std::optional<CoordinateModel> z) {
                 return NodeModel{std::move(x), std::move(y), std::move(z)};
             }),
             py::arg("x"), py::arg("y"), py::arg("z") = std::nullopt)
        .def_readwrite("x", &NodeModel::x)
        .def_readwrite("y", &NodeModel::y)
        .def_readwrite("z", &NodeModel::z);

    py::class_<TrainOutcome>(m, "TrainOutcome")
        .def_readonly("model", &TrainOutcome::model)
        .def_readonly("epoch_error", &TrainOutcome::epoch_error)
        .def_readonly("eval", &TrainOutcome::eval);
    m.def(
        "train_model",
        [](const std::vector<double>& raw, const NetConfig& cfg, std::size_t split) {
            return train_model(raw, cfg, split);
        },
        py::arg("raw"), py::arg("config"), py::arg("split"));

    py::class_<GridCell>(m, "GridCell")
        .def_readonly("n_input", &GridCell::n_input)
        .def_readonly("n_hidden", &GridCell::n_hidden)
        .def_readonly("mean_error", &GridCell::mean_error);
    py::class_<GridResult>(m, "GridResult")
        .def_readonly("best_n_input", &GridResult::best_n_input)
        .def_readonly("best_n_hidden", &GridResult::best_n_hidden)
        .def_readonly("cells", &GridResult::cells)
        .def_readonly("per_series", &GridResult::per_series);
    m.def("grid_select", &grid_select, py::arg("raw_series"), py::arg("n_input_range"),
          py::arg("n_hidden_range"), py::arg("base_config"), py::arg("split"));
}

void bind_stability(py::module_& m) {
    py::class_<ExpirationTime>(m, "ExpirationTime")
        .def_static("beyond_horizon", &ExpirationTime::beyond_horizon)
        .def_static("at", &ExpirationTime::at, py::arg("seconds"))
        .def_property_readonly("beyond", &ExpirationTime::is_beyond)
        .def_property_readonly("seconds", &ExpirationTime::seconds)
        .def("ordering_key", &ExpirationTime::ordering_key)
        .def("__eq__", [](const ExpirationTime& a, const ExpirationTime& b) { return a == b; })
        .def("__repr__",
             [](const ExpirationTime& et) { return "ExpirationTime(" + to_string(et) + ")"; });

    py::class_<PredictedLocations>(m, "PredictedLocations")
        .def(py::init<>())
        .def_readwrite("base_time", &PredictedLocations::base_time)
        .def_readwrite("times", &PredictedLocations::times)
        .def_readwrite("points", &PredictedLocations::points);

    py::class_<DistanceSeries>(m, "DistanceSeries")
        .def(py::init<>())
        .def_readwrite("base_time", &DistanceSeries::base_time)
        .def_readwrite("times", &DistanceSeries::times)
        .def_readwrite("values", &DistanceSeries::values);
    m.def("distances", &distances, py::arg("a"), py::arg("b"));

    py::class_<DistancePolynomial>(m, "DistancePolynomial")
        .def_readonly("coeffs", &DistancePolynomial::coeffs)
        .def_readonly("time_origin", &DistancePolynomial::time_origin)
        .def_readonly("time_scale", &DistancePolynomial::time_scale)
        .def("evaluate", &DistancePolynomial::evaluate, py::arg("t"));
    m.def("fit_polynomial", &fit_polynomial, py::arg("series"));

    m.def("link_expiration_time",
          py::overload_cast<const DistancePolynomial&, double, double, double>(
              &link_expiration_time),
          py::arg("poly"), py::arg("range"), py::arg("eval_start"), py::arg("horizon_end"));
    m.def("link_expiration_time",
          py::overload_cast<const DistancePolynomial&, double, double>(&link_expiration_time),
          py::arg("poly"), py::arg("range"), py::arg("horizon_end"));
    m.def("path_expiration_time", &path_expiration_time, py::arg("link_lets"));
    m.def("predicted_let", &predicted_let, py::arg("model_a"), py::arg("model_b"),
          py::arg("series_a"), py::arg("series_b"), py::arg("at_index"), py::arg("range"),
          py::arg("horizon"));
    m.def("predict_locations", &predict_locations, py::arg("model"), py::arg("series"),
          py::arg("at_index"), py::arg("horizon"));
}

void bind_routing(py::module_& m) {
    py::class_<TopologySnapshot>(m, "TopologySnapshot")
        .def_readonly("time", &TopologySnapshot::time)
        .def_readonly("positions", &TopologySnapshot::positions)
        .def_readonly("adjacency", &TopologySnapshot::adjacency)
        .def("adjacent", &TopologySnapshot::adjacent, py::arg("u"), py::arg("v"));
    m.def("build_topology", &build_topology, py::arg("positions"), py::arg("range"),
          py::arg("time") = 0.0);

    py::class_<Path>(m, "Path")
        .def_readonly("nodes", &Path::nodes)
        .def_readonly("pet", &Path::pet)
        .def_property_readonly("hop_count", &Path::hop_count);
    m.def("enumerate_paths", &enumerate_paths, py::arg("snapshot"), py::arg("source"),
          py::arg("destination"), py::arg("max_hops"));

    py::enum_<Policy>(m, "Policy")
        .value("SHORTEST_HOP", Policy::ShortestHop)
        .value("STABLE_PATH", Policy::StablePath);
    m.def("select_path", &select_path, py::arg("paths"), py::arg("policy"), py::arg("pet_fn"));
    m.def("first_break_time", &first_break_time, py::arg("a"), py::arg("b"), py::arg("range"),
          py::arg("from_time"), py::arg("until"));

    py::class_<SimulationReport>(m, "SimulationReport")
        .def_readonly("policy", &SimulationReport::policy)
        .def_readonly("chosen_path", &SimulationReport::chosen_path)
        .def_readonly("predicted_pet", &SimulationReport::predicted_pet)
        .def_readonly("setup_time", &SimulationReport::setup_time)
        .def_readonly("realized_lifetime", &SimulationReport::realized_lifetime)
        .def_readonly("interruptions", &SimulationReport::interruptions)
        .def_readonly("rediscoveries", &SimulationReport::rediscoveries);

    py::class_<RouteSimOptions>(m, "RouteSimOptions")
        .def(py::init<>())
        .def_readwrite("transmission_range", &RouteSimOptions::transmission_range)
        .def_readwrite("horizon", &RouteSimOptions::horizon)
        .def_readwrite("policies", &RouteSimOptions::policies)
        .def_readwrite("max_hops", &RouteSimOptions::max_hops);
    m.def("run_comparison", &run_comparison, py::arg("scenario"), py::arg("truth"),
          py::arg("models"), py::arg("options"));
}

void bind_io_and_pipeline(py::module_& m) {
    m.def("write_trace_csv", &write_trace_csv, py::arg("path"), py::arg("series"));
    m.def("read_trace_csv", &read_trace_csv, py::arg("path"));
    m.def("read_series", &read_series, py::arg("path"), py::arg("node_id"));
    m.def("save_model", &save_model, py::arg("path"), py::arg("model"), py::arg("node") = "",
          py::arg("coord") = "");
    m.def(
        "load_model",
        [](const std::filesystem::path& path) { return load_model(path); },
        py::arg("path"));
    m.def("write_scenario", &write_scenario, py::arg("json_path"), py::arg("scenario"),
          py::arg("trace_file"));
    m.def("load_scenario", &load_scenario, py::arg("json_path"));
    m.def("write_reports_json", &write_reports_json, py::arg("path"), py::arg("reports"));
    m.def("write_reports_csv", &write_reports_csv, py::arg("path"), py::arg("reports"));

    py::class_<PaperEvalConfig>(m, "PaperEvalConfig")
        .def(py::init<>())
        .def_readwrite("seed", &PaperEvalConfig::seed)
        .def_readwrite("territory", &PaperEvalConfig::territory)
        .def_readwrite("v_min", &PaperEvalConfig::v_min)
        .def_readwrite("v_max", &PaperEvalConfig::v_max)
        .def_readwrite("pause_max", &PaperEvalConfig::pause_max)
        .def_readwrite("interval", &PaperEvalConfig::interval)
        .def_readwrite("count", &PaperEvalConfig::count)
        .def_readwrite("split", &PaperEvalConfig::split)
        .def_readwrite("net", &PaperEvalConfig::net);
    py::class_<PaperEvalResult>(m, "PaperEvalResult")
        .def_readonly("series", &PaperEvalResult::series)
        .def_readonly("x", &PaperEvalResult::x)
        .def_readonly("y", &PaperEvalResult::y)
        .def_readonly("x_gener_curve", &PaperEvalResult::x_gener_curve)
        .def_readonly("y_gener_curve", &PaperEvalResult::y_gener_curve);
    m.def("run_paper_eval",
          py::overload_cast<const PaperEvalConfig&>(&run_paper_eval), py::arg("config"));
    m.def("run_paper_eval",
          py::overload_cast<const PaperEvalConfig&, const std::filesystem::path&>(
              &run_paper_eval),
          py::arg("config"), py::arg("out_dir"));

    py::class_<GridExperimentConfig>(m, "GridExperimentConfig")
        .def(py::init<>())
        .def_readwrite("seed", &GridExperimentConfig::seed)
        .def_readwrite("n_series", &GridExperimentConfig::n_series)
        .def_readwrite("territory", &GridExperimentConfig::territory)
        .def_readwrite("v_min", &GridExperimentConfig::v_min)
        .def_readwrite("v_max", &GridExperimentConfig::v_max)
        .def_readwrite("pause_max", &GridExperimentConfig::pause_max)
        .def_readwrite("interval", &GridExperimentConfig::interval)
        .def_readwrite("count", &GridExperimentConfig::count)
        .def_readwrite("split", &GridExperimentConfig::split)
        .def_readwrite("n_input_range", &GridExperimentConfig::n_input_range)
        .def_readwrite("n_hidden_range", &GridExperimentConfig::n_hidden_range)
        .def_readwrite("net", &GridExperimentConfig::net);
    py::class_<GridExperimentResult>(m, "GridExperimentResult")
        .def_readonly("grid", &GridExperimentResult::grid)
        .def_readonly("per_series_best_n_input",
                      &GridExperimentResult::per_series_best_n_input);
    m.def("run_grid_experiment", &run_grid_experiment, py::arg("config"));
    m.def("train_scenario_models", &train_scenario_models, py::arg("scenario"),
          py::arg("base_config"), py::arg("seed"));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Mobility prediction and stable-path routing toolkit";
    m.attr("__version__") = "0.1.0";
    bind_mobility(m);
    bind_predictor(m);
    bind_stability(m);
    bind_routing(m);
    bind_io_and_pipeline(m);
}
