#pragma once

#include <Eigen/Dense>

#include <utility>

namespace netmark {

/// How the per-node influence power is derived from the flow: from the
/// opinion at the end of the campaign window, or from its time integral.
enum class RhoMode { FinalOpinion, Integral };

/// Network state: one opinion per node, each strictly inside (0, 1).
class OpinionVector {
 public:
  /// Rejects any component outside the open unit interval.
  explicit OpinionVector(Eigen::VectorXd values);

  /// Accepts values that drifted out of (0, 1) by at most 1e-9 and clips
  /// them back to [1e-12, 1 - 1e-12]; larger excursions throw
  /// NumericalError. Components already inside the interval are untouched.
  static OpinionVector clipped(Eigen::VectorXd values);

  const Eigen::VectorXd& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }

 private:
  struct Unchecked {};
  OpinionVector(Eigen::VectorXd values, Unchecked)
      : values_(std::move(values)) {}

  Eigen::VectorXd values_;
};

/// Per-node spend of one marketer at one campaign instant.
struct ActionVector {
  Eigen::VectorXd spends;
  int owner = 1;  // player index, 1 or 2
};

/// Validates non-negative finite spends and the owner index.
ActionVector make_actions(Eigen::VectorXd spends, int owner);
ActionVector zero_actions(Eigen::Index n, int owner);

/// Weight of each node's post-campaign opinion in the stage payoff.
struct InfluencePower {
  Eigen::VectorXd rho;
  int stage = 0;
  RhoMode mode = RhoMode::FinalOpinion;
};

/// exp(-L * duration). Entries within 1e-12 below zero (floating-point
/// artifacts) are clamped to zero; anything more negative throws
/// NumericalError.
Eigen::MatrixXd flow_propagator(const Eigen::MatrixXd& laplacian,
                                double duration);

/// Consensus flow of the state over `duration`; duration 0 is the identity.
OpinionVector flow(const OpinionVector& x, const Eigen::MatrixXd& laplacian,
                   double duration);

/// Flow with a precomputed propagator (the simulator's hot path).
OpinionVector apply_propagator(const OpinionVector& x,
                               const Eigen::MatrixXd& propagator);

/// Campaign jump: per node (x + a1) / (1 + a1 + a2). Output stays inside
/// (0, 1) for non-negative spends.
OpinionVector jump(const OpinionVector& x, const ActionVector& a1,
                   const ActionVector& a2);

/// FinalOpinion mode: column sums of exp(-L * duration). Integral mode:
/// column sums of the time integral of the propagator over the campaign
/// window, by composite Simpson quadrature refined until two successive
/// panel counts agree to 1e-8.
InfluencePower influence_power(const Eigen::MatrixXd& laplacian,
                               double duration, RhoMode mode);

}  // namespace netmark
