#include "mobipred/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace mobipred {

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last) {
        throw std::invalid_argument("not a number: '" + text + "'");
    }
    return value;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << content;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

}  // namespace

void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<LocationSeries>& series) {
    if (series.empty()) {
        throw std::invalid_argument("no series to write");
    }
    const bool with_z = series.front().has_z();
    const std::size_t len = series.front().size();
    for (const LocationSeries& s : series) {
        s.validate();
        if (s.has_z() != with_z || s.size() != len ||
            s.sample_interval != series.front().sample_interval ||
            s.start_time != series.front().start_time) {
            throw std::invalid_argument("all series in one trace file must share the grid");
        }
    }
    std::vector<const LocationSeries*> ordered;
    for (const LocationSeries& s : series) {
        ordered.push_back(&s);
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const LocationSeries* a, const LocationSeries* b) {
                  return a->node_id < b->node_id;
              });

    std::ostringstream out;
    out << (with_z ? "time,node_id,x,y,z" : "time,node_id,x,y") << '\n';
    for (std::size_t i = 0; i < len; ++i) {
        for (const LocationSeries* s : ordered) {
            out << format_double(s->time_at(i)) << ',' << s->node_id << ','
                << format_double(s->x[i]) << ',' << format_double(s->y[i]);
            if (with_z) {
                out << ',' << format_double((*s->z)[i]);
            }
            out << '\n';
        }
    }
    write_file(path, out.str());
}

std::vector<LocationSeries> read_trace_csv(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("empty trace file " + path.string());
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    bool with_z = false;
    if (line == "time,node_id,x,y,z") {
        with_z = true;
    } else if (line != "time,node_id,x,y") {
        throw std::runtime_error("unrecognized trace header in " + path.string());
    }

    std::map<std::string, std::vector<double>> times, xs, ys, zs;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != (with_z ? 5u : 4u)) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": wrong field count");
        }
        const std::string& id = fields[1];
        times[id].push_back(parse_double(fields[0]));
        xs[id].push_back(parse_double(fields[2]));
        ys[id].push_back(parse_double(fields[3]));
        if (with_z) {
            zs[id].push_back(parse_double(fields[4]));
        }
    }

    std::vector<LocationSeries> out;
    for (auto& [id, ts] : times) {
        if (ts.size() < 2) {
            throw std::runtime_error("node " + id + " has fewer than two samples");
        }
        LocationSeries s;
        s.node_id = id;
        s.start_time = ts.front();
        s.sample_interval = ts[1] - ts[0];
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double expected = s.start_time + static_cast<double>(i) * s.sample_interval;
            if (std::abs(ts[i] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
                throw std::runtime_error("node " + id + " is not sampled on a uniform grid");
            }
        }
        s.x = std::move(xs[id]);
        s.y = std::move(ys[id]);
        if (with_z) {
            s.z = std::move(zs[id]);
        }
        s.validate();
        out.push_back(std::move(s));
    }
    return out;
}

LocationSeries read_series(const std::filesystem::path& path, const std::string& node_id) {
    for (LocationSeries& s : read_trace_csv(path)) {
        if (s.node_id == node_id) {
            return std::move(s);
        }
    }
    throw std::runtime_error("node " + node_id + " not found in " + path.string());
}

nlohmann::json model_to_json(const CoordinateModel& model, const std::string& node,
                             const std::string& coord) {
    const NetConfig& cfg = model.net.config();
    nlohmann::json j;
    j["version"] = "1";
    j["config"] = {{"n_input", cfg.n_input},     {"n_hidden", cfg.n_hidden},
                   {"n_feedback", cfg.n_feedback}, {"horizon", cfg.horizon},
                   {"learning_rate", cfg.learning_rate}, {"epochs", cfg.epochs},
                   {"rng_seed", cfg.rng_seed}};
    j["scaler"] = {{"gain", model.scaler.gain}, {"offset", model.scaler.offset}};
    j["w_in_hidden"] = model.net.w_in_hidden();
    j["w_hidden_out"] = model.net.w_hidden_out();
    if (!node.empty() || !coord.empty()) {
        j["trained_on"] = {{"node", node}, {"coord", coord}};
    }
    return j;
}

CoordinateModel model_from_json(const nlohmann::json& j, std::string* node, std::string* coord) {
    if (j.at("version").get<std::string>() != "1") {
        throw std::runtime_error("unsupported model version");
    }
    const auto& jc = j.at("config");
    NetConfig cfg;
    cfg.n_input = jc.at("n_input").get<int>();
    cfg.n_hidden = jc.at("n_hidden").get<int>();
    cfg.n_feedback = jc.at("n_feedback").get<int>();
    cfg.horizon = jc.at("horizon").get<int>();
    cfg.learning_rate = jc.at("learning_rate").get<double>();
    cfg.epochs = jc.at("epochs").get<int>();
    cfg.rng_seed = jc.at("rng_seed").get<std::uint64_t>();

    Scaler scaler;
    scaler.gain = j.at("scaler").at("gain").get<double>();
    scaler.offset = j.at("scaler").at("offset").get<double>();

    RecurrentNet net(cfg, j.at("w_in_hidden").get<std::vector<double>>(),
                     j.at("w_hidden_out").get<std::vector<double>>());
    if (j.contains("trained_on")) {
        if (node != nullptr) {
            *node = j["trained_on"].value("node", "");
        }
        if (coord != nullptr) {
            *coord = j["trained_on"].value("coord", "");
        }
    }
    return CoordinateModel{std::move(net), scaler};
}

void save_model(const std::filesystem::path& path, const CoordinateModel& model,
                const std::string& node, const std::string& coord) {
    write_file(path, model_to_json(model, node, coord).dump(2) + "\n");
}

CoordinateModel load_model(const std::filesystem::path& path, std::string* node,
                           std::string* coord) {
    return model_from_json(nlohmann::json::parse(read_file(path)), node, coord);
}

NodeModel load_node_model(const std::string& prefix) {
    CoordinateModel x = load_model(prefix + "_x.json");
    CoordinateModel y = load_model(prefix + "_y.json");
    NodeModel model{std::move(x), std::move(y), std::nullopt};
    const std::filesystem::path zpath = prefix + "_z.json";
    if (std::filesystem::exists(zpath)) {
        model.z = load_model(zpath);
    }
    return model;
}

ModelSet load_model_set(const std::filesystem::path& dir, const Scenario& scenario) {
    ModelSet models;
    for (const auto& [id, series] : scenario.nodes) {
        models.emplace(id, load_node_model((dir / id).string()));
    }
    return models;
}

void write_scenario(const std::filesystem::path& json_path, const Scenario& scenario,
                    const std::string& trace_file) {
    scenario.validate();
    std::vector<LocationSeries> series;
    for (const auto& [id, s] : scenario.nodes) {
        series.push_back(s);
    }
    write_trace_csv(json_path.parent_path() / trace_file, series);

    nlohmann::json j;
    for (const auto& [id, s] : scenario.nodes) {
        j["nodes"][id] = trace_file;
    }
    j["source"] = scenario.source;
    j["destination"] = scenario.destination;
    j["transmission_range"] = scenario.transmission_range;
    j["sample_interval"] = scenario.sample_interval;
    write_file(json_path, j.dump(2) + "\n");
}

Scenario load_scenario(const std::filesystem::path& json_path) {
    const nlohmann::json j = nlohmann::json::parse(read_file(json_path));
    Scenario scenario;
    scenario.source = j.at("source").get<std::string>();
    scenario.destination = j.at("destination").get<std::string>();
    scenario.transmission_range = j.at("transmission_range").get<double>();
    scenario.sample_interval = j.at("sample_interval").get<double>();

    std::map<std::string, std::vector<LocationSeries>> file_cache;
    for (const auto& [id, ref] : j.at("nodes").items()) {
        const std::string file = ref.get<std::string>();
        if (!file_cache.count(file)) {
            file_cache[file] = read_trace_csv(json_path.parent_path() / file);
        }
        bool found = false;
        for (const LocationSeries& s : file_cache[file]) {
            if (s.node_id == id) {
                scenario.nodes[id] = s;
                found = true;
                break;
            }
        }
        if (!found) {
            throw std::runtime_error("node " + id + " not found in " + file);
        }
    }
    scenario.validate();
    return scenario;
}

nlohmann::json report_to_json(const SimulationReport& report) {
    nlohmann::json j;
    j["policy"] = report.policy;
    j["chosen_path"] = report.chosen_path;
    if (report.chosen_path.empty()) {
        j["predicted_pet"] = nullptr;
    } else if (report.predicted_pet.is_beyond()) {
        j["predicted_pet"] = "beyond-horizon";
    } else {
        j["predicted_pet"] = report.predicted_pet.seconds();
    }
    j["setup_time"] = report.setup_time;
    j["realized_lifetime"] = report.realized_lifetime;
    j["interruptions"] = report.interruptions;
    j["rediscoveries"] = report.rediscoveries;
    return j;
}

void write_reports_json(const std::filesystem::path& path,
                        const std::vector<SimulationReport>& reports) {
    nlohmann::json j = nlohmann::json::array();
    for (const SimulationReport& r : reports) {
        j.push_back(report_to_json(r));
    }
    write_file(path, j.dump(2) + "\n");
}

void write_reports_csv(const std::filesystem::path& path,
                       const std::vector<SimulationReport>& reports) {
    std::ostringstream out;
    out << "policy,lifetime_s,interruptions,rediscoveries\n";
    for (const SimulationReport& r : reports) {
        out << r.policy << ',' << format_double(r.realized_lifetime) << ',' << r.interruptions
            << ',' << r.rediscoveries << '\n';
    }
    write_file(path, out.str());
}

void write_error_curve_csv(const std::filesystem::path& path, const std::vector<double>& e_train,
                           const std::vector<double>& e_gener) {
    if (e_train.size() != e_gener.size()) {
        throw std::invalid_argument("error curves must have equal length");
    }
    std::ostringstream out;
    out << "epoch,E_train,E_gener\n";
    for (std::size_t i = 0; i < e_train.size(); ++i) {
        out << (i + 1) << ',' << format_double(e_train[i]) << ',' << format_double(e_gener[i])
            << '\n';
    }
    write_file(path, out.str());
}

}  // namespace mobipred
