#include "netmark/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "netmark/errors.hpp"
#include "netmark/expm.hpp"

namespace netmark {

namespace {

constexpr double kBoundaryEps = 1e-12;  // clip target for drifted components
constexpr double kDriftSlack = 1e-9;    // max excursion treated as fp noise
constexpr double kEntryClamp = 1e-12;   // propagator negative-entry tolerance

// Simpson quadrature of 1^T exp(-L s) over [0, duration], with the panel
// count doubled until two successive estimates agree to 1e-8.
Eigen::VectorXd integral_influence(const Eigen::MatrixXd& laplacian,
                                   double duration) {
  const Eigen::Index n = laplacian.rows();
  Eigen::VectorXd previous;
  for (int panels = 8; panels <= 8192; panels *= 2) {
    const double h = duration / (2.0 * panels);
    const Eigen::MatrixXd step = flow_propagator(laplacian, h);
    Eigen::RowVectorXd w = Eigen::RowVectorXd::Ones(n);
    Eigen::RowVectorXd acc = w;
    for (int j = 1; j < 2 * panels; ++j) {
      w = w * step;
      acc += (j % 2 == 1 ? 4.0 : 2.0) * w;
    }
    w = w * step;
    acc += w;
    Eigen::VectorXd estimate = (acc * (h / 3.0)).transpose();
    if (previous.size() > 0 &&
        (estimate - previous).lpNorm<Eigen::Infinity>() <= 1e-8)
      return estimate;
    previous = std::move(estimate);
  }
  throw NumericalError(
      "influence_power: integral quadrature did not stabilise to 1e-8");
}

}  // namespace

OpinionVector::OpinionVector(Eigen::VectorXd values)
    : values_(std::move(values)) {
  if (values_.size() == 0)
    throw std::invalid_argument("opinions: empty vector");
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!(v > 0.0 && v < 1.0))
      throw std::invalid_argument("opinions: component " +
                                  std::to_string(i + 1) + " = " +
                                  std::to_string(v) + " outside (0,1)");
  }
}

OpinionVector OpinionVector::clipped(Eigen::VectorXd values) {
  if (values.size() == 0)
    throw std::invalid_argument("opinions: empty vector");
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    double& v = values[i];
    if (!std::isfinite(v))
      throw NumericalError("opinions: non-finite component " +
                           std::to_string(i + 1));
    if (v > 0.0 && v < 1.0) continue;
    if (v < -kDriftSlack || v > 1.0 + kDriftSlack)
      throw NumericalError("opinions: component " + std::to_string(i + 1) +
                           " = " + std::to_string(v) +
                           " drifted outside (0,1) beyond tolerance");
    v = v <= 0.0 ? kBoundaryEps : 1.0 - kBoundaryEps;
  }
  return OpinionVector(std::move(values), Unchecked{});
}

ActionVector make_actions(Eigen::VectorXd spends, int owner) {
  if (owner != 1 && owner != 2)
    throw std::invalid_argument("actions: owner must be 1 or 2");
  for (Eigen::Index i = 0; i < spends.size(); ++i) {
    const double s = spends[i];
    if (!(s >= 0.0) || !std::isfinite(s))
      throw std::invalid_argument("actions: negative spend " +
                                  std::to_string(s) + " at node " +
                                  std::to_string(i + 1));
  }
  return ActionVector{std::move(spends), owner};
}

ActionVector zero_actions(Eigen::Index n, int owner) {
  return make_actions(Eigen::VectorXd::Zero(n), owner);
}

Eigen::MatrixXd flow_propagator(const Eigen::MatrixXd& laplacian,
                                double duration) {
  if (laplacian.rows() != laplacian.cols())
    throw std::invalid_argument("flow: Laplacian must be square");
  if (!(duration >= 0.0))
    throw std::invalid_argument("flow: duration must be non-negative");
  Eigen::MatrixXd p = matrix_exponential(-duration * laplacian);
  const double worst = p.minCoeff();
  if (worst < -kEntryClamp)
    throw NumericalError("flow propagator entry " + std::to_string(worst) +
                         " below zero beyond tolerance");
  p = p.cwiseMax(0.0);
  return p;
}

OpinionVector flow(const OpinionVector& x, const Eigen::MatrixXd& laplacian,
                   double duration) {
  if (laplacian.rows() != x.size())
    throw std::invalid_argument("flow: state and Laplacian dimensions differ");
  return apply_propagator(x, flow_propagator(laplacian, duration));
}

OpinionVector apply_propagator(const OpinionVector& x,
                               const Eigen::MatrixXd& propagator) {
  if (propagator.rows() != propagator.cols() ||
      propagator.rows() != x.size())
    throw std::invalid_argument(
        "flow: state and propagator dimensions differ");
  return OpinionVector::clipped(propagator * x.values());
}

OpinionVector jump(const OpinionVector& x, const ActionVector& a1,
                   const ActionVector& a2) {
  if (a1.owner != 1 || a2.owner != 2)
    throw std::invalid_argument("jump: actions must be owned by players 1, 2");
  if (a1.spends.size() != x.size() || a2.spends.size() != x.size())
    throw std::invalid_argument("jump: dimension mismatch");
  if (a1.spends.size() > 0 &&
      (a1.spends.minCoeff() < 0.0 || a2.spends.minCoeff() < 0.0))
    throw std::invalid_argument("jump: negative spend");
  const Eigen::ArrayXd numerator = x.values().array() + a1.spends.array();
  const Eigen::ArrayXd denominator =
      1.0 + a1.spends.array() + a2.spends.array();
  return OpinionVector::clipped((numerator / denominator).matrix());
}

InfluencePower influence_power(const Eigen::MatrixXd& laplacian,
                               double duration, RhoMode mode) {
  if (laplacian.rows() != laplacian.cols())
    throw std::invalid_argument("influence_power: Laplacian must be square");
  if (!(duration > 0.0))
    throw std::invalid_argument(
        "influence_power: campaign duration must be positive");
  InfluencePower out;
  out.mode = mode;
  if (mode == RhoMode::FinalOpinion)
    out.rho = flow_propagator(laplacian, duration).colwise().sum().transpose();
  else
    out.rho = integral_influence(laplacian, duration);
  return out;
}

}  // namespace netmark
