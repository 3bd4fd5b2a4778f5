#include "netmark/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "netmark/errors.hpp"

namespace netmark {

StrategyProfile StrategyProfile::repeated_ne() {
  return {Kind::RepeatedNe, 0};
}

StrategyProfile StrategyProfile::coopetition(int ne_stages) {
  if (ne_stages < 0)
    throw std::invalid_argument(
        "coopetition: the competitive phase length must be non-negative");
  return {Kind::Coopetition, ne_stages};
}

StrategyProfile StrategyProfile::zero() { return {Kind::Zero, 0}; }

std::pair<ActionVector, ActionVector> StrategyProfile::actions(
    int stage, const OpinionVector& x, const InfluencePower& rho,
    const GameParameters& params, const History& recorded) const {
  (void)recorded;  // state-feedback profiles; kept for the interface
  const bool compete = kind == Kind::RepeatedNe ||
                       (kind == Kind::Coopetition && stage <= ne_stages);
  if (compete) return one_shot_ne(x, rho, params);
  return {zero_actions(x.size(), 1), zero_actions(x.size(), 2)};
}

std::string StrategyProfile::name() const {
  switch (kind) {
    case Kind::RepeatedNe:
      return "repeated-ne";
    case Kind::Coopetition:
      return "coopetition:" + std::to_string(ne_stages);
    case Kind::Zero:
      return "zero";
  }
  return "unknown";
}

namespace {

// Sampled flow over one inter-campaign segment. Iterates a small-step
// propagator for plotting only; the simulation state itself advances by a
// single whole-gap propagator.
void sample_segment(History& hist, const Eigen::MatrixXd& laplacian,
                    int after_stage, double start_time, double length,
                    const OpinionVector& start, int samples) {
  if (samples <= 0 || !(length > 0.0)) return;
  const double step = length / samples;
  const Eigen::MatrixXd p = flow_propagator(laplacian, step);
  OpinionVector x = start;
  hist.samples.push_back({after_stage, start_time, x.values()});
  for (int j = 1; j <= samples; ++j) {
    x = apply_propagator(x, p);
    hist.samples.push_back({after_stage, start_time + j * step, x.values()});
  }
}

}  // namespace

History run_profile(const OpinionVector& x0, const Eigen::MatrixXd& laplacian,
                    const GameParameters& params,
                    const StrategyProfile& profile, int samples_per_stage) {
  validate(params);
  if (laplacian.rows() != laplacian.cols() || laplacian.rows() != x0.size())
    throw std::invalid_argument("run_profile: dimension mismatch");
  if (profile.kind == StrategyProfile::Kind::Coopetition &&
      profile.ne_stages > params.stages())
    throw std::invalid_argument(
        "run_profile: coopetition phase length exceeds the schedule");

  History hist;
  hist.params = params;
  hist.profile = profile;
  hist.x0 = x0.values();

  std::map<double, Eigen::MatrixXd> propagators;
  const auto propagator_for = [&](double d) -> const Eigen::MatrixXd& {
    auto it = propagators.find(d);
    if (it == propagators.end())
      it = propagators.emplace(d, flow_propagator(laplacian, d)).first;
    return it->second;
  };
  std::map<double, InfluencePower> powers;
  const auto power_for = [&](double d) -> const InfluencePower& {
    auto it = powers.find(d);
    if (it == powers.end())
      it = powers.emplace(d, influence_power(laplacian, d, params.rho_mode))
               .first;
    return it->second;
  };

  OpinionVector x = x0;
  double previous_time = 0.0;
  for (int k = 1; k <= params.stages(); ++k) {
    const Campaign& campaign = params.schedule[k - 1];
    const double gap = campaign.time - previous_time;
    sample_segment(hist, laplacian, k - 1, previous_time, gap, x,
                   samples_per_stage);
    if (gap > 0.0) x = apply_propagator(x, propagator_for(gap));

    InfluencePower rho = power_for(campaign.duration);
    rho.stage = k;
    const auto [a1, a2] = profile.actions(k, x, rho, params, hist);
    const OpinionVector x_post = jump(x, a1, a2);
    const auto [u1, u2] = stage_utilities(x_post, a1, a2, rho, params);

    hist.rho.push_back(rho);
    hist.stages.push_back({k, campaign.time, x.values(), a1.spends, a2.spends,
                           x_post.values(), u1, u2});
    x = x_post;
    previous_time = campaign.time;
  }
  sample_segment(hist, laplacian, params.stages(), previous_time,
                 params.schedule.back().duration, x, samples_per_stage);
  return hist;
}

std::pair<double, double> long_term_utility(const History& history) {
  const std::size_t expected = history.params.schedule.size();
  if (expected == 0 || history.stages.size() != expected)
    throw std::invalid_argument(
        "long_term_utility: history incomplete (" +
        std::to_string(history.stages.size()) + " of " +
        std::to_string(expected) + " stages)");
  double u1 = 0.0, u2 = 0.0;
  for (const StageRecord& rec : history.stages) {
    u1 += rec.u1;
    u2 += rec.u2;
  }
  const double k = static_cast<double>(expected);
  return {u1 / k, u2 / k};
}

EquilibriumPrediction predict_equilibrium(
    const std::vector<InfluencePower>& rho_per_stage,
    const GameParameters& params) {
  if (rho_per_stage.empty())
    throw std::invalid_argument(
        "predict_equilibrium: need at least one stage of influence powers");
  double rho_max = std::numeric_limits<double>::infinity();
  for (const InfluencePower& stage : rho_per_stage) {
    if (stage.rho.size() == 0)
      throw std::invalid_argument("predict_equilibrium: empty stage");
    rho_max = std::min(rho_max, stage.rho.maxCoeff());
  }
  EquilibriumPrediction out;
  out.rho_max = rho_max;
  out.eta = eta(params);
  const double total = params.lambda1 + params.lambda2;
  if (rho_max > total) {
    out.regime = EquilibriumPrediction::Regime::UniqueEta;
  } else {
    out.regime = EquilibriumPrediction::Regime::Family;
    out.family_lower = 1.0 - params.lambda1 / rho_max;
    out.family_upper = params.lambda2 / rho_max;
  }
  return out;
}

SustainabilityResult check_sustainability(const History& coopetition,
                                          const History& repeated_ne) {
  if (coopetition.params != repeated_ne.params)
    throw std::invalid_argument(
        "check_sustainability: game parameters differ between histories");
  if (coopetition.x0.size() != repeated_ne.x0.size() ||
      (coopetition.x0.array() != repeated_ne.x0.array()).any())
    throw std::invalid_argument(
        "check_sustainability: initial states differ between histories");

  SustainabilityResult r;
  std::tie(r.u1_cs, r.u2_cs) = long_term_utility(coopetition);
  std::tie(r.u1_ne, r.u2_ne) = long_term_utility(repeated_ne);
  r.player1 = r.u1_cs >= r.u1_ne;
  r.player2 = r.u2_cs >= r.u2_ne;
  r.sustainable = r.player1 && r.player2;
  return r;
}

CertificateResult sustainability_certificate(
    const History& history, int ne_stages, std::optional<double> delta,
    const std::vector<InfluencePower>& rho_per_stage,
    const GameParameters& params) {
  const int total_stages = params.stages();
  if (ne_stages < 0 || ne_stages >= total_stages)
    throw std::invalid_argument(
        "certificate: the competitive phase must end before the last stage");
  if (static_cast<int>(history.stages.size()) < ne_stages + 1)
    throw std::invalid_argument("certificate: history too short");
  if (static_cast<int>(rho_per_stage.size()) != total_stages)
    throw std::invalid_argument(
        "certificate: need one influence power per stage");
  if (delta && !(*delta >= 0.0 && *delta < 1.0))
    throw std::invalid_argument("certificate: delta must lie in [0,1)");

  const double split = eta(params);
  const double total = params.lambda1 + params.lambda2;
  const double rho_max = predict_equilibrium(rho_per_stage, params).rho_max;
  if (!(rho_max > total))
    throw UnsupportedConfiguration(
        "certificate inapplicable: rho_max <= lambda1 + lambda2");

  const Eigen::VectorXd& x_next = history.stages[ne_stages].x_pre;
  const double measured = (x_next.array() - split).abs().maxCoeff();

  CertificateResult r;
  r.delta = delta.value_or(measured);
  r.state_in_band = measured <= r.delta;
  r.regime_margin = std::min(split, 1.0 - split) * (rho_max / total - 1.0);
  r.regime_margin_ok = r.delta < r.regime_margin;
  r.cost_margin = std::numeric_limits<double>::infinity();
  for (int k = ne_stages + 1; k <= total_stages; ++k) {
    const double mass = rho_per_stage[k - 1].rho.sum();
    for (const double lambda_i : {params.lambda1, params.lambda2}) {
      const double rhs = lambda_i * (rho_max * lambda_i) /
                         (2.0 * mass * total * total) /
                         (1.0 + lambda_i / (2.0 * mass));
      r.cost_margin = std::min(r.cost_margin, rhs);
    }
  }
  r.cost_margin_ok = r.delta <= r.cost_margin;
  r.certified = r.state_in_band && r.regime_margin_ok && r.cost_margin_ok;
  return r;
}

std::vector<double> contraction_trace(const History& history, double target) {
  std::vector<double> out;
  out.reserve(history.stages.size());
  for (const StageRecord& rec : history.stages)
    out.push_back((rec.x_pre.array() - target).abs().maxCoeff());
  return out;
}

}  // namespace netmark
