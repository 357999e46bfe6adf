#include "mobipred/routing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mobipred {

bool TopologySnapshot::adjacent(const std::string& u, const std::string& v) const {
    const auto it = adjacency.find(u);
    if (it == adjacency.end()) {
        return false;
    }
    return std::binary_search(it->second.begin(), it->second.end(), v);
}

TopologySnapshot build_topology(const std::map<std::string, Vec3>& positions, double range,
                                double time) {
    if (!(range > 0.0)) {
        throw std::invalid_argument("transmission range must be > 0");
    }
    TopologySnapshot snap;
    snap.time = time;
    snap.positions = positions;
    for (const auto& [id, pos] : positions) {
        snap.adjacency[id];
    }
    for (auto i = positions.begin(); i != positions.end(); ++i) {
        for (auto j = std::next(i); j != positions.end(); ++j) {
            if (distance(i->second, j->second) <= range) {
                snap.adjacency[i->first].push_back(j->first);
                snap.adjacency[j->first].push_back(i->first);
            }
        }
    }
    return snap;
}

namespace {

void dfs_paths(const TopologySnapshot& snap, const std::string& destination, int max_hops,
               std::vector<std::string>& current, std::set<std::string>& visited,
               std::vector<Path>& out) {
    const auto it = snap.adjacency.find(current.back());
    if (it == snap.adjacency.end()) {
        return;
    }
    for (const std::string& nb : it->second) {
        if (visited.count(nb)) {
            continue;
        }
        if (nb == destination) {
            if (static_cast<int>(current.size()) <= max_hops) {
                Path p;
                p.nodes = current;
                p.nodes.push_back(nb);
                out.push_back(std::move(p));
            }
            continue;
        }
        if (static_cast<int>(current.size()) < max_hops) {
            visited.insert(nb);
            current.push_back(nb);
            dfs_paths(snap, destination, max_hops, current, visited, out);
            current.pop_back();
            visited.erase(nb);
        }
    }
}

}  // namespace

std::vector<Path> enumerate_paths(const TopologySnapshot& snapshot, const std::string& source,
                                  const std::string& destination, int max_hops) {
    if (!snapshot.positions.count(source) || !snapshot.positions.count(destination)) {
        throw std::invalid_argument("source and destination must be snapshot nodes");
    }
    std::vector<Path> out;
    if (source == destination) {
        Path p;
        p.nodes = {source};
        out.push_back(std::move(p));
        return out;
    }
    if (max_hops < 1) {
        return out;
    }
    std::vector<std::string> current{source};
    std::set<std::string> visited{source};
    dfs_paths(snapshot, destination, max_hops, current, visited, out);
    return out;
}

std::string to_string(Policy policy) {
    return policy == Policy::ShortestHop ? "shortest" : "stable";
}

std::optional<Policy> policy_from_string(const std::string& name) {
    if (name == "shortest" || name == "shortest-hop") {
        return Policy::ShortestHop;
    }
    if (name == "stable" || name == "stable-path") {
        return Policy::StablePath;
    }
    return std::nullopt;
}

Path select_path(const std::vector<Path>& paths, Policy policy, const PetFn& pet_fn) {
    if (paths.empty()) {
        throw NoRouteError("no route between source and destination");
    }
    std::vector<Path> ranked = paths;
    if (policy == Policy::StablePath) {
        for (Path& p : ranked) {
            p.pet = pet_fn(p);
        }
    }

    auto better = [policy](const Path& a, const Path& b) {
        if (policy == Policy::StablePath && a.pet.ordering_key() != b.pet.ordering_key()) {
            return a.pet.ordering_key() > b.pet.ordering_key();
        }
        if (a.hop_count() != b.hop_count()) {
            return a.hop_count() < b.hop_count();
        }
        return a.nodes < b.nodes;
    };

    std::size_t best = 0;
    for (std::size_t i = 1; i < ranked.size(); ++i) {
        if (better(ranked[i], ranked[best])) {
            best = i;
        }
    }
    Path chosen = ranked[best];
    if (policy == Policy::ShortestHop) {
        chosen.pet = pet_fn(chosen);  // reported, not used for selection
    }
    return chosen;
}

namespace {

// Times at which a trace switches between pausing and moving inside (from, until).
void collect_breakpoints(const ContinuousTrace& trace, double from, double until,
                         std::vector<double>& times) {
    for (const Waypoint& wp : trace.waypoints) {
        for (const double t : {wp.arrival_time, wp.arrival_time + wp.pause}) {
            if (t > from && t < until) {
                times.push_back(t);
            }
        }
    }
}

}  // namespace

std::optional<double> first_break_time(const ContinuousTrace& a, const ContinuousTrace& b,
                                       double range, double from, double until) {
    if (!(until > from)) {
        throw std::invalid_argument("break search needs until > from");
    }
    std::vector<double> times{from, until};
    collect_breakpoints(a, from, until, times);
    collect_breakpoints(b, from, until, times);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    const double range_sq = range * range;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        const double t0 = times[i];
        const double t1 = times[i + 1];
        const Vec3 pa0 = a.position_at(t0);
        const Vec3 pb0 = b.position_at(t0);
        const Vec3 dp = pa0 - pb0;
        const double c = dp.x * dp.x + dp.y * dp.y + dp.z * dp.z - range_sq;
        if (c > 0.0) {
            return t0;  // already out of range at the segment start
        }
        // Both nodes move linearly inside the segment, so the squared
        // distance is an exact quadratic in t - t0.
        const double inv = 1.0 / (t1 - t0);
        const Vec3 dv = inv * ((a.position_at(t1) - b.position_at(t1)) - dp);
        const double qa = dv.x * dv.x + dv.y * dv.y + dv.z * dv.z;
        const double qb = 2.0 * (dp.x * dv.x + dp.y * dv.y + dp.z * dv.z);
        double cross = -1.0;
        if (qa > 0.0) {
            const double disc = qb * qb - 4.0 * qa * c;
            cross = (-qb + std::sqrt(std::max(disc, 0.0))) / (2.0 * qa);
        } else if (qb > 0.0) {
            cross = -c / qb;
        }
        if (cross >= 0.0 && t0 + cross <= t1) {
            return t0 + cross;
        }
    }
    return std::nullopt;
}

namespace {

std::optional<double> path_first_break(const Path& path,
                                       const std::map<std::string, ContinuousTrace>& truth,
                                       double range, double from, double until) {
    std::optional<double> earliest;
    for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
        const auto brk = first_break_time(truth.at(path.nodes[i]), truth.at(path.nodes[i + 1]),
                                          range, from, until);
        if (brk && (!earliest || *brk < *earliest)) {
            earliest = brk;
        }
    }
    return earliest;
}

int history_length(const NodeModel& model) {
    int n = std::max(model.x.net.config().n_input, model.y.net.config().n_input);
    if (model.z) {
        n = std::max(n, model.z->net.config().n_input);
    }
    return n;
}

}  // namespace

std::vector<SimulationReport> run_comparison(const Scenario& scenario,
                                             const std::map<std::string, ContinuousTrace>& truth,
                                             const ModelSet& models,
                                             const RouteSimOptions& options) {
    scenario.validate();
    int max_n_input = 1;
    for (const auto& [id, series] : scenario.nodes) {
        if (!truth.count(id)) {
            throw std::invalid_argument("missing ground-truth trace for node " + id);
        }
        const auto model = models.find(id);
        if (model == models.end()) {
            throw std::invalid_argument("missing trained model for node " + id);
        }
        max_n_input = std::max(max_n_input, history_length(model->second));
    }

    const LocationSeries& grid = scenario.nodes.begin()->second;
    const std::size_t len = grid.size();
    const auto setup_index = static_cast<std::size_t>(max_n_input - 1);
    if (setup_index >= len) {
        throw std::invalid_argument("scenario too short for the models' history windows");
    }
    const double end_time = grid.time_at(len - 1);
    const int max_hops = options.max_hops > 0 ? options.max_hops
                                              : static_cast<int>(scenario.nodes.size()) - 1;

    std::vector<SimulationReport> reports;
    for (const Policy policy : options.policies) {
        SimulationReport rep;
        rep.policy = to_string(policy);
        rep.setup_time = grid.time_at(setup_index);

        bool first_selection = true;
        std::size_t i = setup_index;
        while (i < len) {
            const double now = grid.time_at(i);
            std::map<std::string, Vec3> positions;
            for (const auto& [id, trace] : truth) {
                positions[id] = trace.position_at(now);
            }
            const TopologySnapshot snap =
                build_topology(positions, options.transmission_range, now);
            const std::vector<Path> paths =
                enumerate_paths(snap, scenario.source, scenario.destination, max_hops);
            if (paths.empty()) {
                ++i;  // keep probing each sample time for a route
                continue;
            }

            std::map<std::pair<std::string, std::string>, ExpirationTime> link_cache;
            const PetFn pet_fn = [&](const Path& p) {
                std::vector<ExpirationTime> lets;
                for (std::size_t h = 0; h + 1 < p.nodes.size(); ++h) {
                    auto key = std::minmax(p.nodes[h], p.nodes[h + 1]);
                    auto it = link_cache.find(key);
                    if (it == link_cache.end()) {
                        const ExpirationTime let = predicted_let(
                            models.at(key.first), models.at(key.second),
                            scenario.nodes.at(key.first), scenario.nodes.at(key.second), i,
                            options.transmission_range, options.horizon);
                        it = link_cache.emplace(key, let).first;
                    }
                    lets.push_back(it->second);
                }
                return path_expiration_time(lets);
            };

            const Path chosen = select_path(paths, policy, pet_fn);
            const auto brk =
                path_first_break(chosen, truth, options.transmission_range, now, end_time);
            if (first_selection) {
                rep.chosen_path = chosen.nodes;
                rep.predicted_pet = chosen.pet;
                rep.setup_time = now;
                rep.realized_lifetime = (brk ? *brk : end_time) - now;
                first_selection = false;
            } else {
                ++rep.rediscoveries;
            }
            if (!brk) {
                break;  // the active path survives to the end of the scenario
            }
            ++rep.interruptions;
            // Re-select at the first sample time strictly after the break.
            const double next_t = *brk;
            std::size_t next_i = i + 1;
            while (next_i < len && grid.time_at(next_i) <= next_t) {
                ++next_i;
            }
            i = next_i;
        }
        reports.push_back(std::move(rep));
    }
    return reports;
}

}  // namespace mobipred
