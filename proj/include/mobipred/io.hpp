#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mobipred/mobility.hpp"
#include "mobipred/predictor.hpp"
#include "mobipred/routing.hpp"

namespace mobipred {

/// Shortest round-trip decimal form of a double (std::to_chars), so written
/// files re-read and re-written stay byte-identical.
std::string format_double(double value);
double parse_double(const std::string& text);

/// Trace CSV: header time,node_id,x,y[,z], one row per (sample, node), rows
/// ordered by time then node id. All series must share the sampling grid.
void write_trace_csv(const std::filesystem::path& path, const std::vector<LocationSeries>& series);
std::vector<LocationSeries> read_trace_csv(const std::filesystem::path& path);

/// Picks one node's series out of a trace file.
LocationSeries read_series(const std::filesystem::path& path, const std::string& node_id);

/// Model JSON, format version "1": config, scaler, weight arrays (bias
/// entries last) and an optional record of what the net was trained on.
nlohmann::json model_to_json(const CoordinateModel& model, const std::string& node = "",
                             const std::string& coord = "");
CoordinateModel model_from_json(const nlohmann::json& j, std::string* node = nullptr,
                                std::string* coord = nullptr);
void save_model(const std::filesystem::path& path, const CoordinateModel& model,
                const std::string& node = "", const std::string& coord = "");
CoordinateModel load_model(const std::filesystem::path& path, std::string* node = nullptr,
                           std::string* coord = nullptr);

/// Loads the x/y(/z) models of one node from <prefix>_x.json, <prefix>_y.json
/// and, when present, <prefix>_z.json.
NodeModel load_node_model(const std::string& prefix);

/// Loads <dir>/<node>_<coord>.json for every listed node.
ModelSet load_node_models(const std::filesystem::path& dir,
                          const std::vector<std::string>& node_ids);

/// Loads <dir>/<node>_<coord>.json for every node of the scenario.
ModelSet load_model_set(const std::filesystem::path& dir, const Scenario& scenario);

/// Pairwise predicted link expiration times at every sample with enough
/// history, as CSV rows time,node_i,node_j,let_seconds (the sentinel is
/// written as "beyond-horizon").
void write_let_matrix_csv(const std::filesystem::path& path,
                          const std::vector<LocationSeries>& series, const ModelSet& models,
                          double range, int horizon);

/// Scenario JSON: {nodes: {id: trace-file}, source, destination,
/// transmission_range, sample_interval}; trace files are resolved relative
/// to the scenario file.
void write_scenario(const std::filesystem::path& json_path, const Scenario& scenario,
                    const std::string& trace_file);
Scenario load_scenario(const std::filesystem::path& json_path);

nlohmann::json report_to_json(const SimulationReport& report);
void write_reports_json(const std::filesystem::path& path,
                        const std::vector<SimulationReport>& reports);
/// Summary CSV: policy,lifetime_s,interruptions,rediscoveries.
void write_reports_csv(const std::filesystem::path& path,
                       const std::vector<SimulationReport>& reports);

/// Error-curve CSV: epoch,E_train,E_gener.
void write_error_curve_csv(const std::filesystem::path& path,
                           const std::vector<double>& e_train,
                           const std::vector<double>& e_gener);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace mobipred
