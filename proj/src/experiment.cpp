#include "netmark/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "netmark/errors.hpp"

namespace netmark {

namespace fs = std::filesystem;

namespace {

bool starts_with(const std::string& text, const std::string& prefix) {
  return text.rfind(prefix, 0) == 0;
}

int parse_int(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const int value = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(what);
    return value;
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": not an integer: '" + text + "'");
  }
}

double parse_real(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(what);
    return value;
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": not a number: '" + text + "'");
  }
}

GraphSpec resolve_graph(const std::string& source) {
  if (starts_with(source, "cascading:"))
    return cascading_benchmark(
        parse_int(source.substr(10), "graph size in '" + source + "'"));
  return load_graph(source);
}

Eigen::VectorXd resolve_x0(const ExperimentConfig& cfg, Eigen::Index n) {
  if (cfg.x0) {
    if (static_cast<Eigen::Index>(cfg.x0->size()) != n)
      throw std::invalid_argument(
          "config: explicit x0 has " + std::to_string(cfg.x0->size()) +
          " entries for a graph of " + std::to_string(n) + " nodes");
    return Eigen::Map<const Eigen::VectorXd>(cfg.x0->data(), n);
  }
  if (cfg.initial_opinions == "ramp") {
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i)
      x[i] = 0.4 + static_cast<double>(i + 1) / (2.0 * static_cast<double>(n));
    return x;
  }
  if (starts_with(cfg.initial_opinions, "constant:")) {
    const double v = parse_real(cfg.initial_opinions.substr(9),
                                "config: initial opinion value");
    return Eigen::VectorXd::Constant(n, v);
  }
  throw std::invalid_argument("config: unknown initial-opinion rule '" +
                              cfg.initial_opinions + "'");
}

double default_budget(double threshold, double margin) {
  if (!std::isfinite(threshold)) return 1.0;
  return std::max(1.0, margin * threshold);
}

std::vector<int> default_plot_nodes(Eigen::Index n) {
  std::vector<int> nodes{1, 15, static_cast<int>(n)};
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  nodes.erase(std::remove_if(nodes.begin(), nodes.end(),
                             [n](int v) { return v < 1 || v > n; }),
              nodes.end());
  return nodes;
}

std::vector<InfluencePower> stage_powers(const Eigen::MatrixXd& laplacian,
                                         const GameParameters& params) {
  std::vector<InfluencePower> out;
  out.reserve(params.schedule.size());
  for (std::size_t k = 0; k < params.schedule.size(); ++k) {
    InfluencePower rho = influence_power(
        laplacian, params.schedule[k].duration, params.rho_mode);
    rho.stage = static_cast<int>(k) + 1;
    out.push_back(std::move(rho));
  }
  return out;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j{{"graph", cfg.graph},
                   {"lambda1", cfg.lambda1},
                   {"lambda2", cfg.lambda2},
                   {"budget_margin", cfg.budget_margin},
                   {"campaigns", cfg.campaigns},
                   {"first_campaign", cfg.first_campaign},
                   {"campaign_spacing", cfg.campaign_spacing},
                   {"campaign_duration", cfg.campaign_duration},
                   {"rho_mode", cfg.rho_mode},
                   {"initial_opinions", cfg.initial_opinions},
                   {"profile", cfg.profile},
                   {"out_dir", cfg.out_dir},
                   {"samples_per_stage", cfg.samples_per_stage}};
  if (cfg.budget1) j["budget1"] = *cfg.budget1;
  if (cfg.budget2) j["budget2"] = *cfg.budget2;
  if (!cfg.preset.empty()) j["preset"] = cfg.preset;
  return j;
}

nlohmann::json prediction_to_json(const EquilibriumPrediction& p) {
  nlohmann::json j{{"rho_max", p.rho_max}, {"eta", p.eta}};
  if (p.regime == EquilibriumPrediction::Regime::UniqueEta) {
    j["regime"] = "unique-eta";
  } else {
    j["regime"] = "family";
    j["family_interval"] = {p.family_lower, p.family_upper};
  }
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
}

int report_failure(const std::exception& e) {
  std::cerr << "error: " << e.what() << '\n';
  return 1;
}

}  // namespace

ExperimentConfig paper_preset(int n_nodes) {
  ExperimentConfig cfg;
  cfg.preset = "paper";
  cfg.graph = "cascading:" + std::to_string(n_nodes);
  cfg.lambda1 = 1.0;
  cfg.lambda2 = 0.5;
  cfg.campaigns = 5;
  cfg.first_campaign = 1.0;
  cfg.campaign_spacing = 1.0;
  cfg.campaign_duration = 1.0;
  cfg.rho_mode = "final";
  cfg.initial_opinions = "ramp";
  return cfg;
}

void apply_json_overrides(ExperimentConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object())
    throw std::invalid_argument("config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "graph") cfg.graph = value.get<std::string>();
      else if (key == "lambda1") cfg.lambda1 = value.get<double>();
      else if (key == "lambda2") cfg.lambda2 = value.get<double>();
      else if (key == "budget1") cfg.budget1 = value.get<double>();
      else if (key == "budget2") cfg.budget2 = value.get<double>();
      else if (key == "budget_margin") cfg.budget_margin = value.get<double>();
      else if (key == "campaigns") cfg.campaigns = value.get<int>();
      else if (key == "first_campaign") cfg.first_campaign = value.get<double>();
      else if (key == "campaign_spacing")
        cfg.campaign_spacing = value.get<double>();
      else if (key == "campaign_duration")
        cfg.campaign_duration = value.get<double>();
      else if (key == "rho_mode") cfg.rho_mode = value.get<std::string>();
      else if (key == "initial_opinions")
        cfg.initial_opinions = value.get<std::string>();
      else if (key == "x0") cfg.x0 = value.get<std::vector<double>>();
      else if (key == "profile") cfg.profile = value.get<std::string>();
      else if (key == "k1_min") cfg.k1_min = value.get<int>();
      else if (key == "k1_max") cfg.k1_max = value.get<int>();
      else if (key == "table_sizes")
        cfg.table_sizes = value.get<std::vector<int>>();
      else if (key == "out_dir") cfg.out_dir = value.get<std::string>();
      else if (key == "samples_per_stage")
        cfg.samples_per_stage = value.get<int>();
      else if (key == "plot_nodes")
        cfg.plot_nodes = value.get<std::vector<int>>();
      else if (key == "preset") cfg.preset = value.get<std::string>();
      else
        throw std::invalid_argument("config: unknown key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("config: bad value for '" + key +
                                  "': " + e.what());
    }
  }
}

ExperimentConfig load_config_file(const fs::path& path,
                                  ExperimentConfig base) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("config: cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config: cannot parse " + path.string() +
                                ": " + e.what());
  }
  apply_json_overrides(base, j);
  return base;
}

StrategyProfile parse_profile(const std::string& text, int stages) {
  if (text == "repeated-ne") return StrategyProfile::repeated_ne();
  if (text == "zero") return StrategyProfile::zero();
  if (starts_with(text, "coopetition:")) {
    const int k1 = parse_int(text.substr(12), "profile phase length");
    if (k1 < 0 || k1 > stages)
      throw std::invalid_argument(
          "profile: coopetition phase length " + std::to_string(k1) +
          " outside [0, " + std::to_string(stages) + "]");
    return StrategyProfile::coopetition(k1);
  }
  throw std::invalid_argument(
      "profile: expected repeated-ne, coopetition:<K1> or zero, got '" + text +
      "'");
}

RhoMode parse_rho_mode(const std::string& text) {
  if (text == "final") return RhoMode::FinalOpinion;
  if (text == "integral") return RhoMode::Integral;
  throw std::invalid_argument("rho-mode: expected final or integral, got '" +
                              text + "'");
}

PreparedExperiment prepare(const ExperimentConfig& cfg) {
  PreparedExperiment prep;
  prep.graph = resolve_graph(cfg.graph);
  prep.laplacian = build_laplacian(prep.graph);

  GameParameters params;
  params.lambda1 = cfg.lambda1;
  params.lambda2 = cfg.lambda2;
  params.rho_mode = parse_rho_mode(cfg.rho_mode);
  params.schedule = uniform_schedule(cfg.campaigns, cfg.first_campaign,
                                     cfg.campaign_spacing,
                                     cfg.campaign_duration);
  params.budget1 = 1.0;  // placeholder until thresholds are known
  params.budget2 = 1.0;

  double thr1 = 0.0, thr2 = 0.0;
  const auto powers = stage_powers(prep.laplacian, params);
  for (const InfluencePower& rho : powers) {
    const auto [t1, t2] = budget_threshold(rho, params);
    thr1 = std::max(thr1, t1);
    thr2 = std::max(thr2, t2);
  }
  prep.thresholds = {thr1, thr2};
  params.budget1 = cfg.budget1.value_or(default_budget(thr1, cfg.budget_margin));
  params.budget2 = cfg.budget2.value_or(default_budget(thr2, cfg.budget_margin));
  validate(params);
  prep.params = params;
  prep.x0 = resolve_x0(cfg, prep.graph.n_nodes);
  return prep;
}

double sup_deviation(const Eigen::VectorXd& x, double target) {
  return (x.array() - target).abs().maxCoeff();
}

double rms_deviation(const Eigen::VectorXd& x, double target) {
  return std::sqrt((x.array() - target).square().mean());
}

std::optional<int> convergence_stage(const History& history, double target,
                                     double threshold) {
  for (const StageRecord& rec : history.stages)
    if (rms_deviation(rec.x_pre, target) < threshold) return rec.stage;
  return std::nullopt;
}

RunArtifacts execute_run(const PreparedExperiment& prep,
                         const StrategyProfile& profile,
                         int samples_per_stage, bool probe_beyond) {
  RunArtifacts art;
  art.history = run_profile(OpinionVector(prep.x0), prep.laplacian,
                            prep.params, profile, samples_per_stage);
  art.prediction = predict_equilibrium(art.history.rho, prep.params);
  art.long_term = long_term_utility(art.history);
  const double target = eta(prep.params);
  art.convergence = convergence_stage(art.history, target);
  if (!art.convergence && probe_beyond && prep.params.stages() < 64) {
    GameParameters extended = prep.params;
    const Campaign last = extended.schedule.back();
    const double spacing =
        extended.schedule.size() > 1
            ? last.time - extended.schedule[extended.schedule.size() - 2].time
            : last.duration;
    for (int k = extended.stages(); k < 64; ++k)
      extended.schedule.push_back(
          {last.time + spacing * (k - prep.params.stages() + 1),
           last.duration});
    const History probe = run_profile(OpinionVector(prep.x0), prep.laplacian,
                                      extended, profile, 0);
    art.convergence = convergence_stage(probe, target);
  }
  return art;
}

SweepResult sweep_k1(const PreparedExperiment& prep, int k1_min, int k1_max) {
  if (k1_min < 0 || k1_max > prep.params.stages() || k1_min > k1_max)
    throw std::invalid_argument("sweep: phase range [" +
                                std::to_string(k1_min) + ", " +
                                std::to_string(k1_max) +
                                "] outside [0, K]");
  const History baseline =
      run_profile(OpinionVector(prep.x0), prep.laplacian, prep.params,
                  StrategyProfile::repeated_ne(), 0);
  SweepResult result;
  std::tie(result.u1_ne, result.u2_ne) = long_term_utility(baseline);
  for (int k1 = k1_min; k1 <= k1_max; ++k1) {
    const History cs =
        run_profile(OpinionVector(prep.x0), prep.laplacian, prep.params,
                    StrategyProfile::coopetition(k1), 0);
    const SustainabilityResult sus = check_sustainability(cs, baseline);
    result.rows.push_back({k1, sus.u1_cs, sus.u2_cs, sus.sustainable});
  }
  return result;
}

std::vector<TableRow> stage_utility_table(const ExperimentConfig& base,
                                          const std::vector<int>& sizes) {
  std::vector<TableRow> rows;
  for (int n : sizes) {
    ExperimentConfig cfg = base;
    cfg.graph = "cascading:" + std::to_string(n);

    std::optional<int> kc;
    PreparedExperiment prep;
    History ne;
    for (int stages = std::max(base.campaigns, 8); stages <= 64;
         stages *= 2) {
      cfg.campaigns = stages;
      prep = prepare(cfg);
      ne = run_profile(OpinionVector(prep.x0), prep.laplacian, prep.params,
                       StrategyProfile::repeated_ne(), 0);
      kc = convergence_stage(ne, eta(prep.params));
      if (kc) break;
    }
    if (!kc)
      throw NumericalError("table: no practical convergence within 64 stages "
                           "for n_nodes=" + std::to_string(n));

    const History proposed =
        run_profile(OpinionVector(prep.x0), prep.laplacian, prep.params,
                    StrategyProfile::coopetition(*kc - 1), 0);
    const StageRecord& rec_ne = ne.stages[*kc - 1];
    const StageRecord& rec_cs = proposed.stages[*kc - 1];
    TableRow row;
    row.n_nodes = n;
    row.convergence = *kc;
    row.proposed_u1 = rec_cs.u1;
    row.proposed_u2 = rec_cs.u2;
    row.ne_u1 = rec_ne.u1;
    row.ne_u2 = rec_ne.u2;
    row.proposed_u1_rounded = std::lround(rec_cs.u1);
    row.proposed_u2_rounded = std::lround(rec_cs.u2);
    row.ne_u1_rounded = std::lround(rec_ne.u1);
    row.ne_u2_rounded = std::lround(rec_ne.u2);
    rows.push_back(row);
  }
  return rows;
}

int cmd_run(const ExperimentConfig& cfg) {
  try {
    const PreparedExperiment prep = prepare(cfg);
    const StrategyProfile profile =
        parse_profile(cfg.profile, prep.params.stages());
    const RunArtifacts art =
        execute_run(prep, profile, cfg.samples_per_stage);
    const double target = eta(prep.params);

    fs::create_directories(cfg.out_dir);
    const fs::path out(cfg.out_dir);
    const std::vector<int> nodes = cfg.plot_nodes.empty()
                                       ? default_plot_nodes(prep.x0.size())
                                       : cfg.plot_nodes;
    write_trajectory_csv(out / "trajectory.csv", art.history, nodes);
    write_history_json(out / "history.json", art.history);
    write_stage_csv(out / "stages.csv", art.history, target);

    nlohmann::json summary{
        {"version", 1},
        {"config", config_to_json(cfg)},
        {"eta", target},
        {"budget_thresholds", {prep.thresholds.first, prep.thresholds.second}},
        {"budget_margin", cfg.budget_margin},
        {"budgets", {prep.params.budget1, prep.params.budget2}},
        {"profile", profile.name()},
        {"long_term_utility", {art.long_term.first, art.long_term.second}},
        {"equilibrium_prediction", prediction_to_json(art.prediction)},
        {"final_sup_deviation",
         sup_deviation(art.history.stages.back().x_pre, target)}};
    if (art.convergence)
      summary["convergence_stage"] = *art.convergence;
    else
      summary["convergence_stage"] = nullptr;
    write_text(out / "summary.json", summary.dump(2) + "\n");

    std::cout << "run: profile=" << profile.name() << " graph=" << cfg.graph
              << " N=" << prep.x0.size() << " K=" << prep.params.stages()
              << '\n'
              << "  eta=" << target << " thresholds=("
              << prep.thresholds.first << ", " << prep.thresholds.second
              << ") budgets=(" << prep.params.budget1 << ", "
              << prep.params.budget2 << ")\n"
              << "  long-term utility: U1=" << art.long_term.first
              << " U2=" << art.long_term.second << '\n';
    if (art.convergence)
      std::cout << "  practical convergence at stage " << *art.convergence
                << '\n';
    else
      std::cout << "  no practical convergence within the probe horizon\n";
    std::cout << "  wrote trajectory.csv, history.json, stages.csv, "
                 "summary.json under "
              << cfg.out_dir << '\n';
    return 0;
  } catch (const std::exception& e) {
    return report_failure(e);
  }
}

int cmd_sweep_k1(const ExperimentConfig& cfg) {
  try {
    const PreparedExperiment prep = prepare(cfg);
    const int k1_max = cfg.k1_max < 0 ? prep.params.stages() - 1 : cfg.k1_max;
    const SweepResult result = sweep_k1(prep, cfg.k1_min, k1_max);

    fs::create_directories(cfg.out_dir);
    std::string csv = "k1,u1,u2,sustainable\n";
    for (const SweepRow& row : result.rows)
      csv += std::to_string(row.ne_stages) + ',' + format_double(row.u1) +
             ',' + format_double(row.u2) + ',' +
             (row.sustainable ? "true" : "false") + '\n';
    csv += "ne," + format_double(result.u1_ne) + ',' +
           format_double(result.u2_ne) + ",true\n";
    write_text(fs::path(cfg.out_dir) / "sweep.csv", csv);

    std::cout << "sweep-k1: baseline U1=" << result.u1_ne
              << " U2=" << result.u2_ne << '\n';
    for (const SweepRow& row : result.rows)
      std::cout << "  K1=" << row.ne_stages << ": U1=" << row.u1
                << " U2=" << row.u2
                << (row.sustainable ? "  sustainable" : "  not sustainable")
                << '\n';
    std::cout << "  wrote sweep.csv under " << cfg.out_dir << '\n';
    return 0;
  } catch (const std::exception& e) {
    return report_failure(e);
  }
}

int cmd_table1(const ExperimentConfig& cfg) {
  try {
    const std::vector<TableRow> rows =
        stage_utility_table(cfg, cfg.table_sizes);

    fs::create_directories(cfg.out_dir);
    std::string csv =
        "n,convergence_stage,u1_proposed,u2_proposed,u1_ne,u2_ne,"
        "u1_proposed_rounded,u2_proposed_rounded,u1_ne_rounded,u2_ne_rounded\n";
    for (const TableRow& r : rows)
      csv += std::to_string(r.n_nodes) + ',' + std::to_string(r.convergence) +
             ',' + format_double(r.proposed_u1) + ',' +
             format_double(r.proposed_u2) + ',' + format_double(r.ne_u1) +
             ',' + format_double(r.ne_u2) + ',' +
             std::to_string(r.proposed_u1_rounded) + ',' +
             std::to_string(r.proposed_u2_rounded) + ',' +
             std::to_string(r.ne_u1_rounded) + ',' +
             std::to_string(r.ne_u2_rounded) + '\n';
    write_text(fs::path(cfg.out_dir) / "table1.csv", csv);

    std::cout << "table1 (stage utilities after practical convergence)\n";
    char line[160];
    std::snprintf(line, sizeof(line), "  %-6s %-12s %-22s %-22s %s\n", "N",
                  "conv.stage", "proposed (u1, u2)", "one-shot NE (u1, u2)",
                  "rounded");
    std::cout << line;
    for (const TableRow& r : rows) {
      std::snprintf(line, sizeof(line),
                    "  %-6d %-12d (%9.4f, %9.4f)  (%9.4f, %9.4f)  "
                    "(%ld, %ld) vs (%ld, %ld)\n",
                    r.n_nodes, r.convergence, r.proposed_u1, r.proposed_u2,
                    r.ne_u1, r.ne_u2, r.proposed_u1_rounded,
                    r.proposed_u2_rounded, r.ne_u1_rounded, r.ne_u2_rounded);
      std::cout << line;
    }
    std::cout << "  wrote table1.csv under " << cfg.out_dir << '\n';
    return 0;
  } catch (const std::exception& e) {
    return report_failure(e);
  }
}

int cmd_validate(const ExperimentConfig& cfg) {
  try {
    const PreparedExperiment prep = prepare(cfg);
    parse_profile(cfg.profile, prep.params.stages());
    const auto powers = stage_powers(prep.laplacian, prep.params);
    const EquilibriumPrediction prediction =
        predict_equilibrium(powers, prep.params);

    std::cout << "valid configuration\n"
              << "  graph: " << cfg.graph << " (" << prep.graph.n_nodes
              << " nodes, " << prep.graph.edges.size() << " edges, "
              << (is_strongly_connected(prep.graph) ? "strongly"
                  : is_weakly_connected(prep.graph) ? "weakly only"
                                                    : "not")
              << " connected)\n"
              << "  lambda=(" << prep.params.lambda1 << ", "
              << prep.params.lambda2 << ") eta=" << eta(prep.params)
              << " K=" << prep.params.stages() << '\n'
              << "  budget thresholds=(" << prep.thresholds.first << ", "
              << prep.thresholds.second << ") budgets=("
              << prep.params.budget1 << ", " << prep.params.budget2 << ")\n"
              << "  prediction: "
              << (prediction.regime == EquilibriumPrediction::Regime::UniqueEta
                      ? "unique consensus at eta"
                      : "equilibrium family")
              << " (rho_max=" << prediction.rho_max << ")\n";
    return 0;
  } catch (const std::exception& e) {
    return report_failure(e);
  }
}

}  // namespace netmark
