#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mobipred/mobility.hpp"
#include "mobipred/predictor.hpp"
#include "mobipred/stability.hpp"

namespace mobipred {

/// Connectivity at one instant: an undirected disk graph over node positions.
struct TopologySnapshot {
    double time = 0.0;
    std::map<std::string, Vec3> positions;
    std::map<std::string, std::vector<std::string>> adjacency;  // sorted neighbor lists

    bool adjacent(const std::string& u, const std::string& v) const;
};

/// Edge (i, j) exists iff the Euclidean distance is <= range (inclusive).
TopologySnapshot build_topology(const std::map<std::string, Vec3>& positions, double range,
                                double time = 0.0);

struct Path {
    std::vector<std::string> nodes;  // source first, destination last
    ExpirationTime pet;              // filled in by selection

    int hop_count() const { return static_cast<int>(nodes.size()) - 1; }
};

/// All simple source->destination paths with at most max_hops edges, in
/// depth-first order with neighbors visited in node-id order. Empty when the
/// pair is disconnected.
std::vector<Path> enumerate_paths(const TopologySnapshot& snapshot, const std::string& source,
                                  const std::string& destination, int max_hops);

enum class Policy {
    ShortestHop,
    StablePath,
};

std::string to_string(Policy policy);
std::optional<Policy> policy_from_string(const std::string& name);

struct NoRouteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using PetFn = std::function<ExpirationTime(const Path&)>;

/// Shortest-hop: fewest hops, ties by lexicographic node sequence.
/// Stable-path: greatest path expiration time (beyond-horizon outranks any
/// finite value), ties by fewer hops, then lexicographic. Throws
/// NoRouteError on an empty candidate list.
Path select_path(const std::vector<Path>& paths, Policy policy, const PetFn& pet_fn);

/// First time in (from, until] at which the true distance between the two
/// trajectories exceeds `range`, solved segment-by-segment in closed form;
/// nullopt when the link survives the whole interval. Returns `from` when
/// the link is already broken there.
std::optional<double> first_break_time(const ContinuousTrace& a, const ContinuousTrace& b,
                                       double range, double from, double until);

struct SimulationReport {
    std::string policy;
    std::vector<std::string> chosen_path;  // empty when no route existed at setup
    ExpirationTime predicted_pet;
    double setup_time = 0.0;
    double realized_lifetime = 0.0;  // ground-truth seconds until the chosen path broke
    int interruptions = 0;           // times the active path broke during the run
    int rediscoveries = 0;           // successful re-selections after a break
};

struct RouteSimOptions {
    double transmission_range = 250.0;
    int horizon = 3;
    std::vector<Policy> policies = {Policy::StablePath, Policy::ShortestHop};
    int max_hops = 0;  // 0: node count - 1
};

using ModelSet = std::map<std::string, NodeModel>;

/// Steps through the scenario per policy: selects a route from predicted
/// path expiration times at setup and after every actual break, advancing
/// ground truth on the continuous trajectories. Deterministic.
std::vector<SimulationReport> run_comparison(const Scenario& scenario,
                                             const std::map<std::string, ContinuousTrace>& truth,
                                             const ModelSet& models,
                                             const RouteSimOptions& options);

}  // namespace mobipred
