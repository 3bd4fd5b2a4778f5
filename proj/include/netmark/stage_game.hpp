#pragma once

#include <utility>
#include <vector>

#include "netmark/dynamics.hpp"

namespace netmark {

struct Campaign {
  double time = 0.0;      // campaign instant t_k
  double duration = 0.0;  // campaign window T_k

  friend bool operator==(const Campaign&, const Campaign&) = default;
};

struct GameParameters {
  double lambda1 = 1.0;  // advertising unit cost, marketer 1
  double lambda2 = 1.0;  // advertising unit cost, marketer 2
  double budget1 = 1.0;
  double budget2 = 1.0;
  std::vector<Campaign> schedule;
  RhoMode rho_mode = RhoMode::FinalOpinion;

  int stages() const { return static_cast<int>(schedule.size()); }

  friend bool operator==(const GameParameters&, const GameParameters&) =
      default;
};

/// Campaign instants must be non-negative and strictly increasing, windows
/// positive and no longer than the gap to the next campaign, budgets
/// positive, and lambda1 + lambda2 positive (lambda_i = 0 individually is
/// allowed here and rejected by the operations that divide by it).
void validate(const GameParameters& params);

/// Schedule with campaigns at first_time, first_time + spacing, ... and a
/// common window length.
std::vector<Campaign> uniform_schedule(int stages, double first_time = 1.0,
                                       double spacing = 1.0,
                                       double duration = 1.0);

/// Equilibrium market split lambda2 / (lambda1 + lambda2).
double eta(const GameParameters& params);

enum class Regime { Low, High };

/// Regime of one node together with its active open interval:
///   Low  (rho <= l1 + l2): no-advertising interval (1 - l1/rho, l2/rho);
///   High (rho >  l1 + l2): interior-equilibrium interval
///        (1 - (1 - eta) rho/(l1+l2), eta rho/(l1+l2)).
struct NodeRegime {
  int node = 0;
  Regime regime = Regime::Low;
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double x) const { return x > lower && x < upper; }
};

NodeRegime node_regime(double rho_n, const GameParameters& params,
                       int node = 0);

/// Per-player minimal budget above which the budget constraint never binds:
/// sum over nodes of max{0, sqrt(rho_n/lambda_i) - 1, rho_n/(l1+l2) - 1}.
/// Infinity when the player's unit cost is zero.
std::pair<double, double> budget_threshold(const InfluencePower& rho,
                                           const GameParameters& params);

/// Closed-form campaign equilibrium, node by node. Requires budgets at or
/// above budget_threshold (otherwise UnsupportedConfiguration: the
/// constrained game is out of scope). Spend totals never exceed the budgets.
std::pair<ActionVector, ActionVector> one_shot_ne(const OpinionVector& x,
                                                  const InfluencePower& rho,
                                                  const GameParameters& params);

/// Unconstrained per-node best response of `player` against the opponent's
/// spend: max{0, sqrt(rho_n (a0 + a_opp)/lambda_i) - 1 - a_opp} with
/// a0 = 1 - x_n for player 1 and a0 = x_n for player 2.
double best_response(double x_n, double rho_n, double opponent_spend,
                     int player, const GameParameters& params);

/// Stage payoffs at the post-jump state:
///   u1 = rho . x_post - lambda1 * total spend 1,
///   u2 = rho . (1 - x_post) - lambda2 * total spend 2.
std::pair<double, double> stage_utilities(const OpinionVector& post_state,
                                          const ActionVector& a1,
                                          const ActionVector& a2,
                                          const InfluencePower& rho,
                                          const GameParameters& params);

}  // namespace netmark
