#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "netmark/serialization.hpp"
#include "netmark/strategy.hpp"

namespace netmark {

struct ExperimentConfig {
  std::string graph = "cascading:50";  // "cascading:<N>" or a graph-file path
  double lambda1 = 1.0;
  double lambda2 = 0.5;
  std::optional<double> budget1;  // default: surplus threshold x margin
  std::optional<double> budget2;
  double budget_margin = 1.1;
  int campaigns = 5;
  double first_campaign = 1.0;
  double campaign_spacing = 1.0;
  double campaign_duration = 1.0;
  std::string rho_mode = "final";  // "final" | "integral"
  std::string initial_opinions = "ramp";  // "ramp" | "constant:<v>"
  std::optional<std::vector<double>> x0;  // explicit vector overrides the rule
  std::string profile = "repeated-ne";  // "repeated-ne"|"coopetition:<K1>"|"zero"
  int k1_min = 0;
  int k1_max = -1;  // default: campaigns - 1
  std::vector<int> table_sizes = {50, 100, 200};
  std::string out_dir = "out";
  int samples_per_stage = 20;
  std::vector<int> plot_nodes;  // 1-based; empty: {1, 15, N}
  std::string preset;           // "" or "paper"
};

/// Reference setup: cascading:<N> graph, lambda = (1, 0.5), five campaigns at
/// t = 1..5 with unit windows, final-opinion influence power, ramp initial
/// opinions 0.4 + n/(2N).
ExperimentConfig paper_preset(int n_nodes = 50);

/// Applies any recognised keys of a JSON config object; unknown keys throw.
void apply_json_overrides(ExperimentConfig& cfg, const nlohmann::json& j);
ExperimentConfig load_config_file(const std::filesystem::path& path,
                                  ExperimentConfig base = {});

StrategyProfile parse_profile(const std::string& text, int stages);
RhoMode parse_rho_mode(const std::string& text);

struct PreparedExperiment {
  GraphSpec graph;
  Eigen::MatrixXd laplacian;
  GameParameters params;
  Eigen::VectorXd x0;
  std::pair<double, double> thresholds;  // budget surplus thresholds used
};

/// Resolves the graph source, schedule, budgets (defaulted from the surplus
/// threshold when unset) and initial opinions; validates everything.
PreparedExperiment prepare(const ExperimentConfig& cfg);

double sup_deviation(const Eigen::VectorXd& x, double target);
double rms_deviation(const Eigen::VectorXd& x, double target);

/// Practical convergence: first stage whose campaign-instant state has
/// root-mean-square deviation from target below `threshold`.
std::optional<int> convergence_stage(const History& history, double target,
                                     double threshold = 0.01);

struct RunArtifacts {
  History history;
  EquilibriumPrediction prediction;
  std::pair<double, double> long_term;
  std::optional<int> convergence;  // may come from an extended probe run
};

/// Runs one profile; when the K-stage run has not practically converged,
/// an extended probe (same rule, schedule continued at the last spacing)
/// supplies the convergence stage for reporting only.
RunArtifacts execute_run(const PreparedExperiment& prep,
                         const StrategyProfile& profile,
                         int samples_per_stage = 0, bool probe_beyond = true);

struct SweepRow {
  int ne_stages = 0;
  double u1 = 0, u2 = 0;
  bool sustainable = false;
};

struct SweepResult {
  double u1_ne = 0, u2_ne = 0;
  std::vector<SweepRow> rows;
};

SweepResult sweep_k1(const PreparedExperiment& prep, int k1_min, int k1_max);

struct TableRow {
  int n_nodes = 0;
  int convergence = 0;
  double proposed_u1 = 0, proposed_u2 = 0;
  double ne_u1 = 0, ne_u2 = 0;
  long proposed_u1_rounded = 0, proposed_u2_rounded = 0;
  long ne_u1_rounded = 0, ne_u2_rounded = 0;
};

/// For each network size: run repeated NE to practical convergence (stage
/// k_c), then report the stage-k_c utilities of that run and of the
/// coopetition run that stops campaigning after stage k_c - 1.
std::vector<TableRow> stage_utility_table(const ExperimentConfig& base,
                                          const std::vector<int>& sizes);

// CLI entry points; write artifacts under cfg.out_dir and return an exit code.
int cmd_run(const ExperimentConfig& cfg);
int cmd_sweep_k1(const ExperimentConfig& cfg);
int cmd_table1(const ExperimentConfig& cfg);
int cmd_validate(const ExperimentConfig& cfg);

}  // namespace netmark
