#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netmark/stage_game.hpp"

namespace netmark {

struct History;

/// Per-stage action rule. Both shipped profiles are state-feedback; the
/// recorded history is passed through so history-dependent rules can be
/// added without an API change.
struct StrategyProfile {
  enum class Kind { RepeatedNe, Coopetition, Zero };

  Kind kind = Kind::RepeatedNe;
  int ne_stages = 0;  // coopetition: stages 1..ne_stages play the NE, then zero

  static StrategyProfile repeated_ne();
  static StrategyProfile coopetition(int ne_stages);
  static StrategyProfile zero();

  std::pair<ActionVector, ActionVector> actions(int stage,
                                                const OpinionVector& x,
                                                const InfluencePower& rho,
                                                const GameParameters& params,
                                                const History& recorded) const;
  std::string name() const;

  friend bool operator==(const StrategyProfile&, const StrategyProfile&) =
      default;
};

struct StageRecord {
  int stage = 0;   // k, 1-based
  double time = 0; // t_k
  Eigen::VectorXd x_pre;   // state at the campaign instant
  Eigen::VectorXd a1;
  Eigen::VectorXd a2;
  Eigen::VectorXd x_post;  // state right after the jump
  double u1 = 0;
  double u2 = 0;
};

struct FlowSample {
  int after_stage = 0;  // 0 for the segment before the first campaign
  double time = 0;
  Eigen::VectorXd x;
};

struct History {
  GameParameters params;
  StrategyProfile profile;
  Eigen::VectorXd x0;
  std::vector<InfluencePower> rho;  // one per stage
  std::vector<StageRecord> stages;
  std::vector<FlowSample> samples;  // filled when sampling was requested
};

/// Runs the hybrid dynamics under `profile`: flow from time 0 to the first
/// campaign, then alternately jump and flow. With samples_per_stage > 0 the
/// flow between campaigns (and over the final window) is sampled for export.
History run_profile(const OpinionVector& x0, const Eigen::MatrixXd& laplacian,
                    const GameParameters& params,
                    const StrategyProfile& profile,
                    int samples_per_stage = 0);

/// Average of the recorded stage utilities; requires all K stages.
std::pair<double, double> long_term_utility(const History& history);

struct EquilibriumPrediction {
  enum class Regime { UniqueEta, Family };

  double rho_max = 0;  // min over stages of the per-stage max influence power
  Regime regime = Regime::UniqueEta;
  double eta = 0;           // the unique consensus value when UniqueEta
  double family_lower = 0;  // open equilibrium interval when Family
  double family_upper = 0;
};

EquilibriumPrediction predict_equilibrium(
    const std::vector<InfluencePower>& rho_per_stage,
    const GameParameters& params);

struct SustainabilityResult {
  bool player1 = false;
  bool player2 = false;
  bool sustainable = false;  // both players at least as well off
  double u1_cs = 0, u2_cs = 0;
  double u1_ne = 0, u2_ne = 0;
};

/// Compares long-term utilities of a coopetition history against the
/// repeated-NE history from the same configuration (enforced).
SustainabilityResult check_sustainability(const History& coopetition,
                                          const History& repeated_ne);

/// Sufficient-condition certificate for sustainability; a pass implies the
/// coopetition profile dominates, a fail says nothing. Sub-conditions are
/// reported separately.
struct CertificateResult {
  double delta = 0;  // measured at stage ne_stages+1 unless supplied
  bool state_in_band = false;     // opinions within [eta-delta, eta+delta]
  bool regime_margin_ok = false;  // delta < min(eta,1-eta)(rho_max/(l1+l2)-1)
  bool cost_margin_ok = false;    // delta below the cost bound at every later stage
  bool certified = false;
  double regime_margin = 0;  // right-hand side of the second condition
  double cost_margin = 0;    // smallest right-hand side of the third condition
};

/// Requires rho_max > lambda1 + lambda2 (throws UnsupportedConfiguration
/// otherwise) and a history covering stage ne_stages + 1.
CertificateResult sustainability_certificate(
    const History& history, int ne_stages, std::optional<double> delta,
    const std::vector<InfluencePower>& rho_per_stage,
    const GameParameters& params);

/// Sup-norm distance of each campaign-instant state from target * 1.
std::vector<double> contraction_trace(const History& history, double target);

}  // namespace netmark
