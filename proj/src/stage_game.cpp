#include "netmark/stage_game.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "netmark/errors.hpp"

namespace netmark {

namespace {

constexpr double kActionClamp = 1e-12;

// Case-edge floating noise is clamped; anything more negative means the
// branch selection went wrong.
double clamp_tiny_negative(double v) {
  if (v >= 0.0) return v;
  if (v >= -kActionClamp) return 0.0;
  throw NumericalError("equilibrium action " + std::to_string(v) +
                       " negative beyond tolerance");
}

void check_rho(const InfluencePower& rho) {
  for (Eigen::Index i = 0; i < rho.rho.size(); ++i)
    if (!(rho.rho[i] > 0.0))
      throw std::invalid_argument("influence power must be positive at node " +
                                  std::to_string(i + 1));
}

// Lemma-style case analysis for a single node. Boundary points take the
// exterior branch; the formulas coincide there.
std::pair<double, double> ne_node(double x, double rho_n,
                                  const GameParameters& p, double split,
                                  double total) {
  const NodeRegime reg = node_regime(rho_n, p);
  const auto spend1 = [&] {
    return clamp_tiny_negative(std::sqrt(rho_n * (1.0 - x) / p.lambda1) - 1.0);
  };
  const auto spend2 = [&] {
    return clamp_tiny_negative(std::sqrt(rho_n * x / p.lambda2) - 1.0);
  };
  if (x >= reg.upper) return {0.0, spend2()};
  if (x <= reg.lower) return {spend1(), 0.0};
  if (reg.regime == Regime::Low) return {0.0, 0.0};
  return {clamp_tiny_negative(rho_n * split / total - x),
          clamp_tiny_negative(rho_n * (1.0 - split) / total - (1.0 - x))};
}

}  // namespace

void validate(const GameParameters& params) {
  if (!(params.lambda1 >= 0.0) || !(params.lambda2 >= 0.0))
    throw std::invalid_argument("game: advertising costs must be non-negative");
  if (!(params.lambda1 + params.lambda2 > 0.0))
    throw std::invalid_argument("game: lambda1 + lambda2 must be positive");
  if (!(params.budget1 > 0.0) || !(params.budget2 > 0.0))
    throw std::invalid_argument("game: budgets must be positive");
  if (params.schedule.empty())
    throw std::invalid_argument("game: schedule needs at least one campaign");
  for (std::size_t k = 0; k < params.schedule.size(); ++k) {
    const Campaign& c = params.schedule[k];
    if (!(c.time >= 0.0))
      throw std::invalid_argument("game: campaign time must be non-negative");
    if (!(c.duration > 0.0))
      throw std::invalid_argument("game: campaign window must be positive");
    if (k + 1 < params.schedule.size()) {
      const double gap = params.schedule[k + 1].time - c.time;
      if (!(gap > 0.0))
        throw std::invalid_argument(
            "game: campaign times must be strictly increasing");
      if (c.duration > gap)
        throw std::invalid_argument(
            "game: campaign window overlaps the next campaign at stage " +
            std::to_string(k + 1));
    }
  }
}

std::vector<Campaign> uniform_schedule(int stages, double first_time,
                                       double spacing, double duration) {
  if (stages <= 0)
    throw std::invalid_argument("schedule: stage count must be positive");
  std::vector<Campaign> out;
  out.reserve(stages);
  for (int k = 0; k < stages; ++k)
    out.push_back({first_time + k * spacing, duration});
  return out;
}

double eta(const GameParameters& params) {
  if (!(params.lambda1 + params.lambda2 > 0.0))
    throw std::invalid_argument(
        "eta: lambda1 + lambda2 must be positive");
  return params.lambda2 / (params.lambda1 + params.lambda2);
}

NodeRegime node_regime(double rho_n, const GameParameters& params, int node) {
  if (!(rho_n > 0.0))
    throw std::invalid_argument("node_regime: rho must be positive");
  const double total = params.lambda1 + params.lambda2;
  const double split = eta(params);
  if (rho_n <= total)
    return {node, Regime::Low, 1.0 - params.lambda1 / rho_n,
            params.lambda2 / rho_n};
  return {node, Regime::High, 1.0 - (1.0 - split) * rho_n / total,
          split * rho_n / total};
}

std::pair<double, double> budget_threshold(const InfluencePower& rho,
                                           const GameParameters& params) {
  check_rho(rho);
  const double total = params.lambda1 + params.lambda2;
  if (!(total > 0.0))
    throw std::invalid_argument(
        "budget_threshold: lambda1 + lambda2 must be positive");
  const auto threshold = [&](double lambda_i) {
    if (lambda_i == 0.0) return std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (Eigen::Index n = 0; n < rho.rho.size(); ++n) {
      const double r = rho.rho[n];
      sum += std::max({0.0, std::sqrt(r / lambda_i) - 1.0, r / total - 1.0});
    }
    return sum;
  };
  return {threshold(params.lambda1), threshold(params.lambda2)};
}

std::pair<ActionVector, ActionVector> one_shot_ne(const OpinionVector& x,
                                                  const InfluencePower& rho,
                                                  const GameParameters& params) {
  if (rho.rho.size() != x.size())
    throw std::invalid_argument("one_shot_ne: dimension mismatch");
  check_rho(rho);
  const auto [thr1, thr2] = budget_threshold(rho, params);
  if (!(params.budget1 >= thr1) || !(params.budget2 >= thr2))
    throw UnsupportedConfiguration(
        "one_shot_ne: budgets (B1=" + std::to_string(params.budget1) +
        ", B2=" + std::to_string(params.budget2) +
        ") below the surplus thresholds (" + std::to_string(thr1) + ", " +
        std::to_string(thr2) + "); the budget-constrained game is unsupported");

  const double total = params.lambda1 + params.lambda2;
  const double split = eta(params);
  Eigen::VectorXd a1 = Eigen::VectorXd::Zero(x.size());
  Eigen::VectorXd a2 = Eigen::VectorXd::Zero(x.size());
  for (Eigen::Index n = 0; n < x.size(); ++n) {
    const auto [s1, s2] =
        ne_node(x.values()[n], rho.rho[n], params, split, total);
    a1[n] = s1;
    a2[n] = s2;
  }
  if (a1.sum() > params.budget1 + 1e-9 || a2.sum() > params.budget2 + 1e-9)
    throw NumericalError("one_shot_ne: spend total exceeded the budget "
                         "despite the surplus threshold");
  return {make_actions(std::move(a1), 1), make_actions(std::move(a2), 2)};
}

double best_response(double x_n, double rho_n, double opponent_spend,
                     int player, const GameParameters& params) {
  if (player != 1 && player != 2)
    throw std::invalid_argument("best_response: player must be 1 or 2");
  if (!(rho_n > 0.0))
    throw std::invalid_argument("best_response: rho must be positive");
  if (!(opponent_spend >= 0.0))
    throw std::invalid_argument("best_response: opponent spend negative");
  if (!(x_n >= 0.0 && x_n <= 1.0))
    throw std::invalid_argument("best_response: opinion outside [0,1]");
  const double lambda_i = player == 1 ? params.lambda1 : params.lambda2;
  if (lambda_i <= 0.0)
    throw UnsupportedConfiguration(
        "best_response: unbounded for player " + std::to_string(player) +
        " because its advertising cost is zero");
  const double base = player == 1 ? 1.0 - x_n : x_n;
  return std::max(
      0.0, std::sqrt(rho_n * (base + opponent_spend) / lambda_i) - 1.0 -
               opponent_spend);
}

std::pair<double, double> stage_utilities(const OpinionVector& post_state,
                                          const ActionVector& a1,
                                          const ActionVector& a2,
                                          const InfluencePower& rho,
                                          const GameParameters& params) {
  if (post_state.size() != rho.rho.size() ||
      a1.spends.size() != post_state.size() ||
      a2.spends.size() != post_state.size())
    throw std::invalid_argument("stage_utilities: dimension mismatch");
  const double reach1 = rho.rho.dot(post_state.values());
  const double reach2 = rho.rho.sum() - reach1;
  return {reach1 - params.lambda1 * a1.spends.sum(),
          reach2 - params.lambda2 * a2.spends.sum()};
}

}  // namespace netmark
