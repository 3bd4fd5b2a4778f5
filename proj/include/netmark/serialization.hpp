#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "netmark/graph.hpp"
#include "netmark/strategy.hpp"

namespace netmark {

// Graph files: {"n_nodes": N, "edges": [[src, dst, weight], ...]} with
// 1-based node indices.
nlohmann::json graph_to_json(const GraphSpec& spec);
GraphSpec graph_from_json(const nlohmann::json& j);
GraphSpec load_graph(const std::filesystem::path& path);
void save_graph(const std::filesystem::path& path, const GraphSpec& spec);

/// Full per-stage record (states, actions, utilities, influence powers).
nlohmann::json history_to_json(const History& history);
void write_history_json(const std::filesystem::path& path,
                        const History& history);

/// Sampled trajectory, one row per (segment, time, node): columns
/// k,t,node,opinion. `nodes` selects 1-based nodes; empty means all.
void write_trajectory_csv(const std::filesystem::path& path,
                          const History& history,
                          const std::vector<int>& nodes = {});

/// Stage-level summary: columns
/// k,t,u1,u2,total_spend1,total_spend2,sup_dev,rms_dev where the deviations
/// measure the campaign-instant state against `target`.
void write_stage_csv(const std::filesystem::path& path, const History& history,
                     double target);

/// Shortest round-trip double formatting used by all CSV writers.
std::string format_double(double v);

}  // namespace netmark
