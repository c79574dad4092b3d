#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "netprice/equilibrium.hpp"
#include "netprice/error.hpp"
#include "netprice/optimizer.hpp"
#include "netprice/pricing.hpp"

using namespace netprice;

namespace {

/** Smallest T whose uniform-network revenue reaches fraction q of the infinite-horizon revenue. */
int brute_rounds_to_fraction(double g, double q) {
  const double limit = 1.0 / (4.0 - 2.0 * g);
  for (int T = 1; T < 100000; ++T) {
    if (T / (4.0 * T - 2.0 * g * (T - 1.0)) >= q * limit - 1e-15) return T;
  }
  return -1;
}

/**
 * Two-period market without commitment, solved by backward induction on a grid over the
 * first-round share s: the second-round price is the myopic optimum for the residual demand
 * and the first-round price makes the threshold buyer indifferent.
 */
double no_commitment_grid_revenue(double g) {
  double best = 0.0;
  for (int k = 0; k <= 200000; ++k) {
    const double s = k / 200000.0;
    const double threshold = 1.0 - s;
    double second_best = 0.0;
    double second_price = 0.0;
    for (int j = 0; j <= 400; ++j) {
      const double p = (threshold + g * s) * j / 400.0;
      const double mass = std::clamp(threshold - (p - g * s), 0.0, threshold);
      if (p * mass > second_best) {
        second_best = p * mass;
        second_price = p;
      }
    }
    const double analytic = (threshold + g * s) / 2.0;
    const double mass = std::clamp(threshold - (analytic - g * s), 0.0, threshold);
    if (analytic * mass >= second_best) {
      second_best = analytic * mass;
      second_price = analytic;
    }
    const double first_price = second_price - g * s;
    best = std::max(best, s * first_price + second_best);
  }
  return best;
}

}  // namespace

TEST(Pricing, UniformPolicyClosedForms) {
  for (double g : {0.0, 0.3, 1.0}) {
    for (int T : {1, 2, 4, 7}) {
      const PolicyReport report = uniform_policy(g, T);
      const double D = 2.0 * T - g * (T - 1.0);
      for (int t = 1; t <= T; ++t) EXPECT_NEAR(report.path.at_remaining(t), (T - g * (t - 1.0)) / D, 1e-14);
      EXPECT_NEAR(report.normalized_revenue, T / (4.0 * T - 2.0 * g * (T - 1.0)), 1e-14);
      if (g > 0) {
        const double S = 1.0 / g;
        EXPECT_NEAR(report.normalized_revenue, block_revenue(S, T), 1e-12);
        EXPECT_NEAR(*report.welfare, block_welfare(S, T), 1e-12);
      }
    }
  }
}

TEST(Pricing, UniformPolicyRejectsOutOfRange) {
  EXPECT_THROW(uniform_policy(1.2, 3), Error);
  EXPECT_THROW(uniform_policy(0.5, 0), Error);
}

TEST(Pricing, RoundsToFraction) {
  EXPECT_EQ(rounds_to_fraction(0.2, 0.95), 3);
  EXPECT_EQ(rounds_to_fraction(0.8, 0.95), 13);
  for (double g : {0.1, 0.35, 0.6, 0.9, 1.0}) {
    for (double q : {0.5, 0.8, 0.9, 0.99}) {
      EXPECT_EQ(rounds_to_fraction(g, q), brute_rounds_to_fraction(g, q)) << g << " " << q;
    }
  }
  EXPECT_THROW(rounds_to_fraction(0.0, 0.9), Error);
  EXPECT_THROW(rounds_to_fraction(0.5, 1.0), Error);
}

TEST(Pricing, BlockPriceFormsAgree) {
  for (double S : {1.0, 1.7, 4.0}) {
    for (int T : {1, 3, 9}) {
      EXPECT_LT((block_prices(S, T) - block_prices_alternate(S, T)).cwiseAbs().maxCoeff(), 1e-14);
    }
  }
}

TEST(Pricing, BlockWelfareAtSingleRound) {
  for (double S : {1.0, 2.5, 10.0}) EXPECT_NEAR(block_welfare(S, 1), 3.0 / 8.0, 1e-15);
}

TEST(Pricing, BlockPolicyThresholdsMatchRecursion) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 20; ++k) {
    const BlockNetwork net = fixtures::random_valid_net(rng);
    for (int T : {1, 2, 5}) {
      const PolicyReport report = block_policy(net, T);
      const ThresholdSchedule recursion = thresholds_for_prices(net, UniformDistribution{}, report.path);
      EXPECT_LT((recursion.v - report.thresholds->v).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_NEAR(report.normalized_revenue, limit_revenue_of_path(net, UniformDistribution{}, report.path), 1e-12);
    }
  }
}

TEST(Pricing, BlockAdoptionMatchesBonacichShares) {
  std::mt19937_64 rng(37);
  const BlockNetwork net = fixtures::random_valid_net(rng);
  const int T = 5;
  const PolicyReport report = block_policy(net, T);
  const NetworkMeasures measures = compute_measures(net);
  const double D = 2.0 * T * measures.s_sum - (T - 1.0);
  for (int t = 2; t <= T; ++t) {
    const int r = T + 1 - t;
    for (int i = 0; i < net.m(); ++i) {
      EXPECT_NEAR((*report.adoption)(r - 1, i), (T + 1.0 - t) / D * measures.e_inv_ones[i], 1e-12);
    }
  }
}

TEST(Pricing, NonInteriorThresholdsAreFlagged) {
  Vec alpha(2);
  alpha << 0.01, 0.99;
  const PolicyReport report = block_policy(BlockNetwork(alpha, Mat::Identity(2, 2)), 2);
  EXPECT_TRUE(fixtures::has_warning(report, "NonInteriorThresholds"));
}

TEST(Pricing, NonMonotoneThresholdsAreFlagged) {
  Vec alpha(2);
  alpha << 0.2, 0.8;
  const PolicyReport report = block_policy(BlockNetwork(alpha, Mat::Identity(2, 2)), 2);
  EXPECT_NEAR(report.thresholds->at(1, 0), 3.0 / 7.0, 1e-15);
  EXPECT_NEAR(report.thresholds->at(2, 0), 2.0 / 7.0, 1e-15);
  EXPECT_TRUE(fixtures::has_warning(report, "NonMonotoneThresholds"));
  EXPECT_FALSE(fixtures::has_warning(report, "NonInteriorThresholds"));
}

TEST(Pricing, BlockPolicyRejectsAssumptionFailure) {
  Vec alpha(2);
  alpha << 0.5, 0.5;
  try {
    block_policy(BlockNetwork(alpha, 3.0 * Mat::Identity(2, 2)), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AssumptionViolated);
  }
}

TEST(Pricing, NonuniformWithUniformDistributionReducesToBlock) {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 10; ++k) {
    const BlockNetwork net = fixtures::random_valid_net(rng);
    for (int T : {1, 3, 6}) {
      const PolicyReport block = block_policy(net, T);
      const PolicyReport general = nonuniform_policy(net, UniformDistribution{}, T);
      EXPECT_LT((block.path.prices() - general.path.prices()).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_NEAR(block.normalized_revenue, general.normalized_revenue, 1e-10);
      EXPECT_NEAR(*block.welfare, *general.welfare, 1e-10);
    }
  }
}

TEST(Pricing, NonuniformPowerDistributionMatchesOracle) {
  const auto dist = std::make_shared<PowerDistribution>(2.0);
  std::mt19937_64 rng(43);
  fixtures::NetRequirements req;
  req.max_m = 3;
  req.max_T = 3;
  req.dist = dist.get();
  const BlockNetwork net = fixtures::random_valid_net(rng, req);
  const PolicyReport policy = nonuniform_policy(net, *dist, 3);
  EXPECT_LE(policy.path.at_remaining(3), policy.path.at_remaining(1) + 1e-15);
  EXPECT_LT(std::abs(policy.extras.at("fixed_point_residual")), 1e-10);
  const OptResult oracle = maximize(ObjectiveSpec::nonuniform(net, dist, 3));
  EXPECT_LT((oracle.argmax.prices() - policy.path.prices()).cwiseAbs().maxCoeff(), 1e-5);
  EXPECT_NEAR(oracle.value, policy.normalized_revenue, 1e-8);
  EXPECT_NEAR(policy.normalized_revenue, limit_revenue_of_path(net, *dist, policy.path), 1e-10);
}

TEST(Pricing, NonuniformFailsWhenAssumption3Fails) {
  try {
    nonuniform_policy(BlockNetwork::uniform(0.5), PowerDistribution{0.5}, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AssumptionViolated);
  }
}

TEST(Pricing, DiscriminationTwoRoundClosedForm) {
  std::mt19937_64 rng(47);
  fixtures::NetRequirements req;
  req.discrimination = true;
  for (int k = 0; k < 20; ++k) {
    const BlockNetwork net = fixtures::random_valid_net(rng, req);
    const PolicyReport report = discrimination_policy(net, 2);
    const int m = net.m();
    const Vec sum = report.path.prices().row(0).transpose() + report.path.prices().row(1).transpose();
    EXPECT_LT((sum - Vec::Ones(m)).cwiseAbs().maxCoeff(), 1e-10);
    const Mat I = Mat::Identity(m, m);
    const Vec expected = Vec::Ones(m) - 0.5 * (I - net.EA() / 4.0).inverse() * Vec::Ones(m);
    EXPECT_LT((report.path.prices().row(0).transpose() - expected).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Pricing, DiscriminationMatchesOracleForSymmetricNets) {
  std::mt19937_64 rng(53);
  fixtures::NetRequirements req;
  req.discrimination = true;
  req.symmetric = true;
  req.max_m = 3;
  for (int k = 0; k < 5; ++k) {
    const BlockNetwork net = fixtures::random_valid_net(rng, req);
    for (int T : {1, 2, 4}) {
      const PolicyReport report = discrimination_policy(net, T);
      const OptResult oracle = maximize(ObjectiveSpec::discrimination(net, T));
      EXPECT_LT((oracle.argmax.prices() - report.path.prices()).cwiseAbs().maxCoeff(), 1e-6);
      EXPECT_NEAR(oracle.value, report.normalized_revenue, 1e-9);
      EXPECT_GE(report.normalized_revenue, block_policy(net, T).normalized_revenue - 1e-12);
    }
  }
}

TEST(Pricing, StaticPolicyIsStationary) {
  Vec alpha(2);
  alpha << 0.4, 0.6;
  Mat E(2, 2);
  E << 0.3, 0.2, 0.1, 0.4;
  const BlockNetwork net(alpha, E);
  const Mat Q = net.A() * (Mat::Identity(2, 2) - net.EA()).inverse();
  auto revenue = [&](const Vec& p) { return p.dot(Q * (Vec::Ones(2) - p)); };
  const Vec p = static_policy(net).path.prices().row(0).transpose();
  for (int i = 0; i < 2; ++i) {
    Vec up = p, down = p;
    up[i] += 1e-6;
    down[i] -= 1e-6;
    EXPECT_NEAR((revenue(up) - revenue(down)) / 2e-6, 0.0, 1e-8);
  }
}

TEST(Pricing, NoCommitmentAtFullExternality) {
  const PolicyReport report = no_commitment_two_period(1.0);
  EXPECT_NEAR(report.path.at_round(1), 0.25, 1e-15);
  EXPECT_NEAR(report.path.at_round(2), 0.5, 1e-15);
  EXPECT_NEAR(report.normalized_revenue, 5.0 / 16.0, 1e-15);
  EXPECT_NEAR(no_commitment_second_price(1.0, report.extras.at("first_round_share")), 0.5, 1e-15);
}

TEST(Pricing, NoCommitmentMatchesBackwardInduction) {
  for (double g : {0.1, 0.4, 0.7, 1.0}) {
    const PolicyReport report = no_commitment_two_period(g);
    EXPECT_NEAR(report.normalized_revenue, no_commitment_grid_revenue(g), 1e-8) << g;
    EXPECT_LE(report.normalized_revenue, 1.0 / (4.0 - g));
  }
  EXPECT_NEAR(no_commitment_bound(), (3.0 + std::sqrt(13.0)) / 2.0, 1e-15);
  EXPECT_THROW(no_commitment_two_period(4.0), Error);
}

TEST(Pricing, AllSalesUniformRevenue) {
  for (double g : {0.0, 0.3, 0.9}) {
    for (int T : {1, 2, 6}) {
      const PolicyReport report = all_sales_policy(BlockNetwork::uniform(g), T);
      const double expected = g == 0.0 ? 0.25 : 0.25 * (1.0 - std::pow(g, T)) / (1.0 - g);
      EXPECT_NEAR(report.normalized_revenue, expected, 1e-12);
    }
  }
  const PolicyReport limit = all_sales_policy(BlockNetwork::uniform(0.5), 4, true);
  EXPECT_NEAR(limit.extras.at("limit_revenue"), 0.5, 1e-12);
}

TEST(Pricing, AllSalesRejectsIncreasingMass) {
  Vec alpha(2);
  alpha << 0.5, 0.5;
  Mat E(2, 2);
  E << 2.5, 0.5, 0.5, 2.5;
  try {
    all_sales_policy(BlockNetwork(alpha, E), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConditionViolated);
  }
}

TEST(Pricing, AllSalesLimitNeedsSpectralRadiusBelowOne) {
  try {
    all_sales_policy(BlockNetwork::uniform(1.0), 3, true);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SpectralRadiusTooLarge);
  }
}
