#include "netmark/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "netmark/stage_game.hpp"

namespace netmark {

namespace {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

std::string rho_mode_name(RhoMode mode) {
  return mode == RhoMode::FinalOpinion ? "final" : "integral";
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json graph_to_json(const GraphSpec& spec) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : spec.edges)
    edges.push_back({e.src, e.dst, e.weight});
  return {{"n_nodes", spec.n_nodes}, {"edges", std::move(edges)}};
}

GraphSpec graph_from_json(const nlohmann::json& j) {
  GraphSpec spec;
  try {
    spec.n_nodes = j.at("n_nodes").get<int>();
    for (const auto& entry : j.at("edges")) {
      if (!entry.is_array() || entry.size() != 3)
        throw std::invalid_argument(
            "graph: each edge must be [src, dst, weight]");
      spec.edges.push_back({entry[0].get<int>(), entry[1].get<int>(),
                            entry[2].get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("graph: malformed JSON: ") +
                                e.what());
  }
  validate(spec);
  return spec;
}

GraphSpec load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("graph: cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("graph: cannot parse " + path.string() +
                                ": " + e.what());
  }
  return graph_from_json(j);
}

void save_graph(const std::filesystem::path& path, const GraphSpec& spec) {
  validate(spec);
  auto out = open_for_write(path);
  out << graph_to_json(spec).dump(2) << '\n';
}

nlohmann::json history_to_json(const History& history) {
  nlohmann::json schedule = nlohmann::json::array();
  for (const Campaign& c : history.params.schedule)
    schedule.push_back({{"t", c.time}, {"T", c.duration}});

  nlohmann::json rho = nlohmann::json::array();
  for (const InfluencePower& stage : history.rho)
    rho.push_back(vector_to_json(stage.rho));

  nlohmann::json stages = nlohmann::json::array();
  for (const StageRecord& rec : history.stages) {
    stages.push_back({{"k", rec.stage},
                      {"t", rec.time},
                      {"x_pre", vector_to_json(rec.x_pre)},
                      {"a1", vector_to_json(rec.a1)},
                      {"a2", vector_to_json(rec.a2)},
                      {"x_post", vector_to_json(rec.x_post)},
                      {"u1", rec.u1},
                      {"u2", rec.u2}});
  }

  nlohmann::json j{{"version", 1},
                   {"profile", history.profile.name()},
                   {"lambda", {history.params.lambda1, history.params.lambda2}},
                   {"budget", {history.params.budget1, history.params.budget2}},
                   {"eta", eta(history.params)},
                   {"rho_mode", rho_mode_name(history.params.rho_mode)},
                   {"schedule", std::move(schedule)},
                   {"x0", vector_to_json(history.x0)},
                   {"rho", std::move(rho)},
                   {"stages", std::move(stages)}};
  if (history.stages.size() == history.params.schedule.size()) {
    const auto [u1, u2] = long_term_utility(history);
    j["long_term_utility"] = {u1, u2};
  }
  return j;
}

void write_history_json(const std::filesystem::path& path,
                        const History& history) {
  auto out = open_for_write(path);
  out << history_to_json(history).dump(2) << '\n';
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const History& history,
                          const std::vector<int>& nodes) {
  const Eigen::Index n = history.x0.size();
  std::vector<int> selected = nodes;
  if (selected.empty())
    for (int i = 1; i <= n; ++i) selected.push_back(i);
  for (int node : selected)
    if (node < 1 || node > n)
      throw std::invalid_argument("trajectory: node " + std::to_string(node) +
                                  " out of range");
  auto out = open_for_write(path);
  out << "k,t,node,opinion\n";
  for (const FlowSample& sample : history.samples)
    for (int node : selected)
      out << sample.after_stage << ',' << format_double(sample.time) << ','
          << node << ',' << format_double(sample.x[node - 1]) << '\n';
}

void write_stage_csv(const std::filesystem::path& path, const History& history,
                     double target) {
  auto out = open_for_write(path);
  out << "k,t,u1,u2,total_spend1,total_spend2,sup_dev,rms_dev\n";
  for (const StageRecord& rec : history.stages) {
    const Eigen::ArrayXd dev = rec.x_pre.array() - target;
    out << rec.stage << ',' << format_double(rec.time) << ','
        << format_double(rec.u1) << ',' << format_double(rec.u2) << ','
        << format_double(rec.a1.sum()) << ',' << format_double(rec.a2.sum())
        << ',' << format_double(dev.abs().maxCoeff()) << ','
        << format_double(std::sqrt(dev.square().mean())) << '\n';
  }
}

}  // namespace netmark
