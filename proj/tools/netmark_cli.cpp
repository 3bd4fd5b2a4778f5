// Command-line front end: run a strategy profile, sweep the coopetition
// switch-off stage, reproduce the stage-utility table, or validate a
// configuration. Settings are resolved as defaults < --preset < --config
// file < explicit flags.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "netmark/experiment.hpp"

namespace {

struct CliOptions {
  std::string preset;
  std::string config_file;
  std::optional<int> nodes;
  std::optional<std::string> graph;
  std::optional<double> lambda1, lambda2, budget1, budget2, budget_margin;
  std::optional<int> campaigns;
  std::optional<double> first_campaign, campaign_spacing, campaign_duration;
  std::optional<std::string> rho_mode, x0_rule, profile, out_dir;
  std::optional<int> k1_min, k1_max, samples_per_stage;
  std::vector<int> n_list;
  std::vector<int> plot_nodes;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--preset", opt.preset,
                  "named preset expanding to the reference setup ('paper')");
  cmd->add_option("--config", opt.config_file, "JSON config file");
  cmd->add_option("--nodes", opt.nodes,
                  "size of the generated cascading graph");
  cmd->add_option("--graph", opt.graph,
                  "graph source: cascading:<N> or a graph JSON file");
  cmd->add_option("--lambda1", opt.lambda1, "advertising unit cost, player 1");
  cmd->add_option("--lambda2", opt.lambda2, "advertising unit cost, player 2");
  cmd->add_option("--budget1", opt.budget1, "budget, player 1");
  cmd->add_option("--budget2", opt.budget2, "budget, player 2");
  cmd->add_option("--budget-margin", opt.budget_margin,
                  "multiplier on the surplus threshold for default budgets");
  cmd->add_option("--campaigns", opt.campaigns, "number of campaigns K");
  cmd->add_option("--first-campaign", opt.first_campaign,
                  "time of the first campaign");
  cmd->add_option("--campaign-spacing", opt.campaign_spacing,
                  "time between campaigns");
  cmd->add_option("--campaign-duration", opt.campaign_duration,
                  "campaign window length T_k");
  cmd->add_option("--rho-mode", opt.rho_mode,
                  "influence-power mode: final or integral");
  cmd->add_option("--x0", opt.x0_rule,
                  "initial opinions: ramp or constant:<v>");
  cmd->add_option("--profile", opt.profile,
                  "strategy: repeated-ne, coopetition:<K1> or zero");
  cmd->add_option("--out", opt.out_dir, "output directory");
  cmd->add_option("--samples-per-stage", opt.samples_per_stage,
                  "flow samples per inter-campaign segment");
  cmd->add_option("--plot-nodes", opt.plot_nodes,
                  "1-based nodes exported to trajectory.csv");
  cmd->add_option("--k1-min", opt.k1_min, "sweep: first switch-off stage");
  cmd->add_option("--k1-max", opt.k1_max, "sweep: last switch-off stage");
  cmd->add_option("--n-list", opt.n_list, "table: network sizes");
}

netmark::ExperimentConfig resolve(const CliOptions& opt) {
  netmark::ExperimentConfig cfg;
  if (opt.preset == "paper") {
    cfg = netmark::paper_preset(opt.nodes.value_or(50));
  } else if (!opt.preset.empty()) {
    throw std::invalid_argument("unknown preset '" + opt.preset + "'");
  }
  if (!opt.config_file.empty())
    cfg = netmark::load_config_file(opt.config_file, cfg);
  if (opt.nodes) cfg.graph = "cascading:" + std::to_string(*opt.nodes);
  if (opt.graph) cfg.graph = *opt.graph;
  if (opt.lambda1) cfg.lambda1 = *opt.lambda1;
  if (opt.lambda2) cfg.lambda2 = *opt.lambda2;
  if (opt.budget1) cfg.budget1 = *opt.budget1;
  if (opt.budget2) cfg.budget2 = *opt.budget2;
  if (opt.budget_margin) cfg.budget_margin = *opt.budget_margin;
  if (opt.campaigns) cfg.campaigns = *opt.campaigns;
  if (opt.first_campaign) cfg.first_campaign = *opt.first_campaign;
  if (opt.campaign_spacing) cfg.campaign_spacing = *opt.campaign_spacing;
  if (opt.campaign_duration) cfg.campaign_duration = *opt.campaign_duration;
  if (opt.rho_mode) cfg.rho_mode = *opt.rho_mode;
  if (opt.x0_rule) cfg.initial_opinions = *opt.x0_rule;
  if (opt.profile) cfg.profile = *opt.profile;
  if (opt.out_dir) cfg.out_dir = *opt.out_dir;
  if (opt.samples_per_stage) cfg.samples_per_stage = *opt.samples_per_stage;
  if (!opt.plot_nodes.empty()) cfg.plot_nodes = opt.plot_nodes;
  if (opt.k1_min) cfg.k1_min = *opt.k1_min;
  if (opt.k1_max) cfg.k1_max = *opt.k1_max;
  if (!opt.n_list.empty()) cfg.table_sizes = opt.n_list;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"netmark: duopoly marketing campaigns over a social network"};
  app.require_subcommand(1);

  CliOptions opt;
  CLI::App* run = app.add_subcommand(
      "run", "simulate one strategy profile and export its trajectory");
  CLI::App* sweep = app.add_subcommand(
      "sweep-k1", "long-term utilities versus the coopetition switch-off stage");
  CLI::App* table = app.add_subcommand(
      "table1", "post-convergence stage utilities across network sizes");
  CLI::App* validate = app.add_subcommand(
      "validate", "check a configuration without running it");
  for (CLI::App* cmd : {run, sweep, table, validate})
    add_common_options(cmd, opt);

  CLI11_PARSE(app, argc, argv);

  try {
    const netmark::ExperimentConfig cfg = resolve(opt);
    if (run->parsed()) return netmark::cmd_run(cfg);
    if (sweep->parsed()) return netmark::cmd_sweep_k1(cfg);
    if (table->parsed()) return netmark::cmd_table1(cfg);
    return netmark::cmd_validate(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
