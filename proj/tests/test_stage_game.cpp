#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "netmark/errors.hpp"
#include "netmark/graph.hpp"
#include "netmark/stage_game.hpp"
#include "oracles.hpp"

using namespace netmark;

namespace {

GameParameters params_with(double lambda1, double lambda2, double budget1 = 1.0,
                           double budget2 = 1.0) {
  GameParameters p;
  p.lambda1 = lambda1;
  p.lambda2 = lambda2;
  p.budget1 = budget1;
  p.budget2 = budget2;
  p.schedule = uniform_schedule(1);
  return p;
}

InfluencePower power(std::initializer_list<double> values) {
  InfluencePower rho;
  rho.rho = Eigen::VectorXd(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) rho.rho[i++] = v;
  return rho;
}

OpinionVector single(double x) {
  return OpinionVector(Eigen::VectorXd::Constant(1, x));
}

// Budgets generous enough for the surplus threshold plus grid headroom.
GameParameters surplus_params(double lambda1, double lambda2,
                              const InfluencePower& rho) {
  GameParameters p = params_with(lambda1, lambda2);
  const auto [t1, t2] = budget_threshold(rho, p);
  p.budget1 = t1 + 2.0;
  p.budget2 = t2 + 2.0;
  return p;
}

}  // namespace

TEST_CASE("market split eta") {
  CHECK(eta(params_with(1.0, 0.5)) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(eta(params_with(0.7, 0.7)) == 0.5);
  CHECK(eta(params_with(1.0, 0.0)) == 0.0);
  CHECK_THROWS_AS(eta(params_with(0.0, 0.0)), std::invalid_argument);
}

TEST_CASE("node regimes and their intervals") {
  const GameParameters p = params_with(1.0, 0.5);

  const NodeRegime low = node_regime(1.0, p);
  CHECK(low.regime == Regime::Low);
  CHECK(low.lower == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(low.upper == doctest::Approx(0.5).epsilon(1e-15));

  const NodeRegime high = node_regime(3.0, p);
  CHECK(high.regime == Regime::High);
  CHECK(high.lower == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  CHECK(high.upper == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  CHECK(node_regime(1.5, p).regime == Regime::Low);  // boundary stays Low
  CHECK_THROWS_AS(node_regime(0.0, p), std::invalid_argument);
}

TEST_CASE("non-empty active intervals below the boundary") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> lam(0.2, 2.0);
  std::uniform_real_distribution<double> frac(0.05, 0.999);
  for (int trial = 0; trial < 200; ++trial) {
    const GameParameters p = params_with(lam(rng), lam(rng));
    const double total = p.lambda1 + p.lambda2;
    const NodeRegime low = node_regime(frac(rng) * total, p);
    CHECK(low.lower < low.upper);
    const NodeRegime high = node_regime(total / frac(rng), p);
    CHECK(high.lower < high.upper);
  }
}

TEST_CASE("budget thresholds") {
  const GameParameters p = params_with(1.0, 0.5);

  const auto [t1, t2] = budget_threshold(power({1.0, 1.0, 1.0}), p);
  CHECK(t1 == 0.0);  // sqrt(1/1)-1 = 0 and 1/1.5-1 < 0 at every node
  CHECK(t2 == doctest::Approx(3.0 * (std::sqrt(2.0) - 1.0)).epsilon(1e-14));

  const auto [s1, s2] = budget_threshold(power({4.0}), p);
  CHECK(s1 == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
  CHECK(s2 == doctest::Approx(std::sqrt(8.0) - 1.0).epsilon(1e-14));

  const auto [z1, z2] = budget_threshold(power({0.3, 0.4}), p);
  CHECK(z1 == 0.0);
  CHECK(z2 == 0.0);

  const auto [f1, f2] = budget_threshold(power({1.0}), params_with(1.0, 0.0));
  CHECK(std::isfinite(f1));
  CHECK(f2 == std::numeric_limits<double>::infinity());
}

TEST_CASE("one-shot equilibrium per regime branch") {
  const InfluencePower low_rho = power({1.0});
  const InfluencePower high_rho = power({3.0});
  const GameParameters p_low = surplus_params(1.0, 0.5, low_rho);
  const GameParameters p_high = surplus_params(1.0, 0.5, high_rho);

  SUBCASE("inside the low-regime interval nobody advertises") {
    const auto [a1, a2] = one_shot_ne(single(0.3), low_rho, p_low);
    CHECK(a1.spends[0] == 0.0);
    CHECK(a2.spends[0] == 0.0);
  }
  SUBCASE("high-regime interior produces the interior spends") {
    const auto [a1, a2] = one_shot_ne(single(0.5), high_rho, p_high);
    CHECK(a1.spends[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(a2.spends[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  }
  SUBCASE("low regime above the interval: player 2 pushes back") {
    const auto [a1, a2] = one_shot_ne(single(0.8), low_rho, p_low);
    CHECK(a1.spends[0] == 0.0);
    CHECK(a2.spends[0] ==
          doctest::Approx(std::sqrt(1.6) - 1.0).epsilon(1e-12));
  }
  SUBCASE("budget below the threshold is rejected") {
    GameParameters tight = p_high;
    tight.budget2 = 0.1;
    CHECK_THROWS_AS(one_shot_ne(single(0.5), high_rho, tight),
                    UnsupportedConfiguration);
  }
  SUBCASE("non-positive influence power is rejected") {
    CHECK_THROWS_AS(one_shot_ne(single(0.5), power({0.0}), p_low),
                    std::invalid_argument);
  }
}

TEST_CASE("best responses") {
  const GameParameters p = params_with(1.0, 0.5);
  // x inside the low-regime interval: neither player responds to silence
  CHECK(best_response(0.3, 1.0, 0.0, 1, p) == 0.0);
  CHECK(best_response(0.3, 1.0, 0.0, 2, p) == 0.0);
  CHECK(best_response(0.8, 1.0, 0.0, 2, p) ==
        doctest::Approx(std::sqrt(1.6) - 1.0).epsilon(1e-12));
  // rho (a0 + a_opp) <= lambda (1 + a_opp)^2: the max binds at zero
  CHECK(best_response(0.2, 0.5, 1.0, 2, p) == 0.0);
  CHECK_THROWS_AS(best_response(0.5, 1.0, 0.0, 2, params_with(1.0, 0.0)),
                  UnsupportedConfiguration);
  CHECK_THROWS_AS(best_response(0.5, 1.0, -0.1, 1, p), std::invalid_argument);
}

TEST_CASE("equilibrium actions are best responses to each other") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> lam(0.2, 2.0);
  std::uniform_real_distribution<double> frac(0.05, 0.98);
  std::uniform_real_distribution<double> hi(1.01, 3.0);
  std::uniform_real_distribution<double> unit(0.02, 0.98);
  for (int trial = 0; trial < 100; ++trial) {
    const bool high = trial % 2 == 0;
    GameParameters p = params_with(lam(rng), lam(rng));
    const double total = p.lambda1 + p.lambda2;
    const InfluencePower rho =
        power({high ? total * hi(rng) : total * frac(rng)});
    p = surplus_params(p.lambda1, p.lambda2, rho);
    const double x = unit(rng);
    const auto [a1, a2] = one_shot_ne(single(x), rho, p);
    CHECK(a1.spends[0] ==
          doctest::Approx(best_response(x, rho.rho[0], a2.spends[0], 1, p))
              .epsilon(1e-10));
    CHECK(a2.spends[0] ==
          doctest::Approx(best_response(x, rho.rho[0], a1.spends[0], 2, p))
              .epsilon(1e-10));
  }
}

TEST_CASE("grid search cannot improve on the closed-form equilibrium") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> lam(0.2, 2.0);
  std::uniform_real_distribution<double> frac(0.05, 0.98);
  std::uniform_real_distribution<double> hi(1.01, 3.0);
  std::uniform_real_distribution<double> unit(0.02, 0.98);
  const int grid_points = 2000;
  for (int trial = 0; trial < 50; ++trial) {
    const bool high = trial % 2 == 0;
    GameParameters p = params_with(lam(rng), lam(rng));
    const double total = p.lambda1 + p.lambda2;
    const InfluencePower rho =
        power({high ? total * hi(rng) : total * frac(rng)});
    p = surplus_params(p.lambda1, p.lambda2, rho);
    const double x = unit(rng);
    const double r = rho.rho[0];
    const auto [a1, a2] = one_shot_ne(single(x), rho, p);
    const double u1_star =
        oracle::u1_node(x, r, a1.spends[0], a2.spends[0], p.lambda1);
    const double u2_star =
        oracle::u2_node(x, r, a1.spends[0], a2.spends[0], p.lambda2);
    double best1 = u1_star, best2 = u2_star;
    for (int g = 0; g < grid_points; ++g) {
      const double try1 = p.budget1 * g / (grid_points - 1.0);
      const double try2 = p.budget2 * g / (grid_points - 1.0);
      best1 = std::max(best1,
                       oracle::u1_node(x, r, try1, a2.spends[0], p.lambda1));
      best2 = std::max(best2,
                       oracle::u2_node(x, r, a1.spends[0], try2, p.lambda2));
    }
    CHECK(best1 - u1_star <= 1e-6);
    CHECK(best2 - u2_star <= 1e-6);
  }
}

TEST_CASE("high-regime interior jump lands exactly on eta") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> lam(0.2, 2.0);
  std::uniform_real_distribution<double> hi(1.05, 4.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    GameParameters p = params_with(lam(rng), lam(rng));
    const double total = p.lambda1 + p.lambda2;
    const InfluencePower rho = power({total * hi(rng)});
    p = surplus_params(p.lambda1, p.lambda2, rho);
    const NodeRegime reg = node_regime(rho.rho[0], p);
    REQUIRE(reg.regime == Regime::High);
    const double lo = std::max(reg.lower, 0.0) + 1e-6;
    const double hi_x = std::min(reg.upper, 1.0) - 1e-6;
    const double x = lo + (hi_x - lo) * unit(rng);
    const auto [a1, a2] = one_shot_ne(single(x), rho, p);
    const double post = jump(single(x), a1, a2).values()[0];
    CHECK(std::abs(post - eta(p)) <= 1e-12);
  }
}

TEST_CASE("eta lies inside every strictly-low node's quiet interval") {
  std::mt19937 rng(51);
  std::uniform_real_distribution<double> lam(0.2, 2.0);
  std::uniform_real_distribution<double> frac(0.05, 0.999);
  for (int trial = 0; trial < 200; ++trial) {
    const GameParameters p = params_with(lam(rng), lam(rng));
    const double total = p.lambda1 + p.lambda2;
    const NodeRegime reg = node_regime(frac(rng) * total, p);
    CHECK(reg.contains(eta(p)));
  }
}

TEST_CASE("equilibrium spends fit the surplus budget on the benchmark") {
  const Eigen::MatrixXd lap = build_laplacian(cascading_benchmark(50));
  const InfluencePower rho = influence_power(lap, 1.0, RhoMode::FinalOpinion);
  GameParameters p = params_with(1.0, 0.5);
  const auto [t1, t2] = budget_threshold(rho, p);
  p.budget1 = t1;
  p.budget2 = t2;  // exactly at the threshold

  std::mt19937 rng(61);
  std::uniform_real_distribution<double> unit(0.02, 0.98);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd x(50);
    for (int i = 0; i < 50; ++i) x[i] = unit(rng);
    const auto [a1, a2] = one_shot_ne(OpinionVector(x), rho, p);
    CHECK(a1.spends.sum() <= p.budget1 + 1e-12);
    CHECK(a2.spends.sum() <= p.budget2 + 1e-12);
    CHECK(a1.spends.minCoeff() >= 0.0);
    CHECK(a2.spends.minCoeff() >= 0.0);
  }
}

TEST_CASE("interior and exterior formulas coincide at the case boundaries") {
  std::mt19937 rng(71);
  std::uniform_real_distribution<double> lam(0.2, 2.0);
  std::uniform_real_distribution<double> hi(1.05, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const GameParameters p = params_with(lam(rng), lam(rng));
    const double total = p.lambda1 + p.lambda2;
    const double split = eta(p);
    const double r = total * hi(rng);
    const NodeRegime reg = node_regime(r, p);

    // upper boundary: interior spend 1 vanishes, spend 2 meets the root form
    const double xu = reg.upper;
    CHECK(std::abs(r * split / total - xu) <= 1e-9);
    CHECK(std::abs((r * (1.0 - split) / total - (1.0 - xu)) -
                   (std::sqrt(r * xu / p.lambda2) - 1.0)) <= 1e-9);

    // lower boundary: interior spend 2 vanishes, spend 1 meets the root form
    const double xl = reg.lower;
    CHECK(std::abs(r * (1.0 - split) / total - (1.0 - xl)) <= 1e-9);
    CHECK(std::abs((r * split / total - xl) -
                   (std::sqrt(r * (1.0 - xl) / p.lambda1) - 1.0)) <= 1e-9);
  }
}

TEST_CASE("the two published interior-spend expressions agree") {
  // (k_i/(k_i + k_-i))^2 k_-i rho with k_i = 1/lambda_i equals
  // rho eta/(lambda1 + lambda2) for player 1.
  std::mt19937 rng(81);
  std::uniform_real_distribution<double> lam(0.2, 2.0);
  std::uniform_real_distribution<double> rho_dist(0.1, 6.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double l1 = lam(rng), l2 = lam(rng), r = rho_dist(rng);
    const double k1 = 1.0 / l1, k2 = 1.0 / l2;
    const double via_k = std::pow(k1 / (k1 + k2), 2) * k2 * r;
    const double via_eta = r * (l2 / (l1 + l2)) / (l1 + l2);
    CHECK(via_k == doctest::Approx(via_eta).epsilon(1e-12));
  }
}

TEST_CASE("stage utilities") {
  const GameParameters p = params_with(1.0, 0.5);
  const Eigen::MatrixXd lap = build_laplacian(cascading_benchmark(50));
  const InfluencePower rho = influence_power(lap, 1.0, RhoMode::FinalOpinion);

  SUBCASE("consensus at eta with no spending splits the audience") {
    const OpinionVector consensus(Eigen::VectorXd::Constant(50, 1.0 / 3.0));
    const auto [u1, u2] = stage_utilities(consensus, zero_actions(50, 1),
                                          zero_actions(50, 2), rho, p);
    CHECK(u1 == doctest::Approx(50.0 / 3.0).epsilon(1e-9));
    CHECK(u2 == doctest::Approx(100.0 / 3.0).epsilon(1e-9));
  }
  SUBCASE("symmetric costs and the midpoint state give equal payoffs") {
    const GameParameters sym = params_with(0.8, 0.8);
    const OpinionVector mid(Eigen::VectorXd::Constant(50, 0.5));
    const auto [u1, u2] = stage_utilities(mid, zero_actions(50, 1),
                                          zero_actions(50, 2), rho, sym);
    CHECK(u1 == doctest::Approx(u2).epsilon(1e-12));
  }
  SUBCASE("with no spending the payoffs sum to the total influence mass") {
    std::mt19937 rng(91);
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd x(50);
      for (int i = 0; i < 50; ++i) x[i] = unit(rng);
      const auto [u1, u2] = stage_utilities(OpinionVector(x),
                                            zero_actions(50, 1),
                                            zero_actions(50, 2), rho, p);
      CHECK(u1 + u2 == doctest::Approx(rho.rho.sum()).epsilon(1e-12));
    }
  }
  SUBCASE("dimension mismatches are rejected") {
    const OpinionVector mid(Eigen::VectorXd::Constant(3, 0.5));
    CHECK_THROWS_AS(stage_utilities(mid, zero_actions(3, 1),
                                    zero_actions(3, 2), rho, p),
                    std::invalid_argument);
  }
}

TEST_CASE("game parameter validation") {
  GameParameters p = params_with(1.0, 0.5);
  CHECK_NOTHROW(validate(p));

  GameParameters bad = p;
  bad.schedule.clear();
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);

  bad = p;
  bad.budget1 = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);

  bad = p;
  bad.schedule = {{1.0, 1.0}, {1.0, 1.0}};  // not strictly increasing
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);

  bad = p;
  bad.schedule = {{1.0, 2.5}, {2.0, 1.0}};  // window overlaps next campaign
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);

  bad = p;
  bad.lambda1 = 0.0;
  bad.lambda2 = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}
