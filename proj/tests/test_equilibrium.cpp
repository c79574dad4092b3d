#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "netprice/equilibrium.hpp"
#include "netprice/error.hpp"
#include "netprice/pricing.hpp"

using namespace netprice;

namespace {

/**
 * Utility of buying in chronological round r given the cutoffs: valuation, plus the externality
 * from everyone who bought in earlier rounds, minus the price.
 */
double utility_of_round(const BlockNetwork& net, const ValuationDistribution& dist, const PricePath& path,
                        const ThresholdSchedule& sched, int group, double v, int r) {
  const int T = path.T();
  const int t = T + 1 - r;
  Vec earlier(net.m());
  for (int j = 0; j < net.m(); ++j) earlier[j] = 1.0 - dist.cdf(sched.at(t + 1, j));
  const double externality = (net.EA() * earlier)[group];
  return v + externality - path.at_round(r, path.is_per_group() ? group : 0);
}

PricePath sample_path(std::mt19937_64& rng, int T, double lo, double hi) {
  std::uniform_real_distribution<double> unit(lo, hi);
  std::vector<double> values(T);
  for (auto& v : values) v = unit(rng);
  std::sort(values.begin(), values.end());
  return PricePath::scalar(Eigen::Map<Vec>(values.data(), T));
}

}  // namespace

TEST(Equilibrium, IndifferenceConditionsHold) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    const BlockNetwork net = fixtures::random_valid_net(rng);
    const PolicyReport policy = block_policy(net, 4);
    const ThresholdSchedule sched = thresholds_for_prices(net, UniformDistribution{}, policy.path);
    const int T = policy.path.T();
    for (int i = 0; i < net.m(); ++i) {
      for (int r = 1; r < T; ++r) {
        const int t = T + 1 - r;
        const double v = sched.at(t, i);
        EXPECT_NEAR(utility_of_round(net, UniformDistribution{}, policy.path, sched, i, v, r),
                    utility_of_round(net, UniformDistribution{}, policy.path, sched, i, v, r + 1), 1e-12);
      }
      EXPECT_NEAR(utility_of_round(net, UniformDistribution{}, policy.path, sched, i, sched.at(1, i), T), 0.0,
                  1e-12);
    }
  }
}

TEST(Equilibrium, ThresholdBuyersBestRespond) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const BlockNetwork net = fixtures::random_valid_net(rng);
  const PowerDistribution dist(2.0);
  const PricePath path = sample_path(rng, 3, 0.3, 0.5);
  const ThresholdSchedule sched = thresholds_for_prices(net, dist, path);
  if (sched.clamped) GTEST_SKIP() << "sampled path clamps";
  for (int draw = 0; draw < 2000; ++draw) {
    const double v = unit(rng);
    const int group = draw % net.m();
    const std::optional<int> chosen = buyer_purchase_round(v, group, sched);
    double best = 0.0;
    for (int r = 1; r <= path.T(); ++r) {
      best = std::max(best, utility_of_round(net, dist, path, sched, group, v, r));
    }
    const double achieved = chosen ? utility_of_round(net, dist, path, sched, group, v, *chosen) : 0.0;
    EXPECT_NEAR(achieved, best, 1e-12) << "v=" << v;
  }
}

TEST(Equilibrium, ThresholdsAreMonotoneAndEndAtOne) {
  const BlockNetwork net = BlockNetwork::uniform(0.5);
  const ThresholdSchedule sched = thresholds_for_prices(net, UniformDistribution{}, uniform_policy(0.5, 5).path);
  EXPECT_EQ(sched.T(), 5);
  EXPECT_DOUBLE_EQ(sched.at(6, 0), 1.0);
  for (int t = 1; t <= 5; ++t) EXPECT_LE(sched.at(t, 0), sched.at(t + 1, 0) + 1e-15);
}

TEST(Equilibrium, DecreasingPathIsRejected) {
  Vec p(2);
  p << 0.6, 0.4;
  try {
    thresholds_for_prices(BlockNetwork::uniform(0.5), UniformDistribution{}, PricePath::scalar(p));
    FAIL() << "expected NonMonotonePath";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonMonotonePath);
  }
}

TEST(Equilibrium, SteepPathIsInfeasible) {
  Vec p(2);
  p << 0.05, 0.95;
  try {
    thresholds_for_prices(BlockNetwork::uniform(0.5), UniformDistribution{}, PricePath::scalar(p));
    FAIL() << "expected InfeasibleThresholds";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InfeasibleThresholds);
  }
}

TEST(Equilibrium, RevenueMatchesDirectSummation) {
  std::mt19937_64 rng(17);
  const PowerDistribution dist(2.0);
  for (int k = 0; k < 10; ++k) {
    const BlockNetwork net = fixtures::random_valid_net(rng);
    const PricePath path = sample_path(rng, 3, 0.35, 0.5);
    ThresholdSchedule sched;
    try {
      sched = thresholds_for_prices(net, dist, path);
    } catch (const Error&) {
      continue;
    }
    double direct = 0.0;
    for (int r = 1; r <= 3; ++r) {
      const int t = 4 - r;
      for (int i = 0; i < net.m(); ++i) {
        direct += path.at_round(r) * net.alpha()[i] * (dist.cdf(sched.at(t + 1, i)) - dist.cdf(sched.at(t, i)));
      }
    }
    EXPECT_NEAR(limit_revenue_of_path(net, dist, path), direct, 1e-12);
  }
}

TEST(Equilibrium, WelfareMatchesIndependentIntegration) {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 10; ++k) {
    const BlockNetwork net = fixtures::random_valid_net(rng);
    const int T = 3;
    const PolicyReport policy = block_policy(net, T);
    const ThresholdSchedule& sched = *policy.thresholds;
    double welfare = 0.0;
    for (int i = 0; i < net.m(); ++i) {
      for (int t = 1; t <= T; ++t) {
        const double lo = sched.at(t, i);
        const double hi = sched.at(t + 1, i);
        Vec earlier(net.m());
        for (int j = 0; j < net.m(); ++j) earlier[j] = 1.0 - sched.at(t + 1, j);
        const double externality = (net.EA() * earlier)[i];
        welfare += net.alpha()[i] * ((hi * hi - lo * lo) / 2.0 + externality * (hi - lo));
      }
    }
    EXPECT_NEAR(limit_welfare_of_path(net, UniformDistribution{}, policy.path), welfare, 1e-12);
    EXPECT_NEAR(*policy.welfare, welfare, 1e-12);
  }
}

TEST(Equilibrium, AdoptionIsCumulativeShare) {
  const BlockNetwork net = BlockNetwork::uniform(0.5);
  const PolicyReport policy = uniform_policy(0.5, 3);
  const ThresholdSchedule sched = thresholds_for_prices(net, UniformDistribution{}, policy.path);
  const Mat adoption = adoption_from_thresholds(net, UniformDistribution{}, sched);
  ASSERT_EQ(adoption.rows(), 3);
  for (int r = 1; r <= 3; ++r) EXPECT_NEAR(adoption(r - 1, 0), 1.0 - sched.at(4 - r, 0), 1e-14);
}

TEST(Equilibrium, PurchaseRoundUsesClosedInterval) {
  ThresholdSchedule sched;
  sched.v = Mat(3, 1);
  sched.v << 0.4, 0.7, 1.0;
  EXPECT_EQ(buyer_purchase_round(0.7, 0, sched), 1);
  EXPECT_EQ(buyer_purchase_round(0.69, 0, sched), 2);
  EXPECT_EQ(buyer_purchase_round(0.4, 0, sched), 2);
  EXPECT_FALSE(buyer_purchase_round(0.39, 0, sched).has_value());
}
