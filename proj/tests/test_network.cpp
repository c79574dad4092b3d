#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "netprice/error.hpp"
#include "netprice/network.hpp"

using namespace netprice;

namespace {

double exact_block_revenue(const Mat& E, int T) {
  const double S = E.inverse().sum();
  return S * T / (4.0 * T * S - 2.0 * (T - 1.0));
}

const Condition& condition(const ValidationReport& report, const std::string& name) {
  for (const auto& c : report.conditions) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("missing condition " + name);
}

}  // namespace

TEST(Network, ConstructorValidatesInput) {
  Vec alpha(2);
  alpha << 0.5, 0.5;
  EXPECT_NO_THROW(BlockNetwork(alpha, Mat::Identity(2, 2)));
  EXPECT_THROW(BlockNetwork(alpha, Mat::Identity(3, 3)), Error);
  Vec bad_sum(2);
  bad_sum << 0.5, 0.6;
  EXPECT_THROW(BlockNetwork(bad_sum, Mat::Identity(2, 2)), Error);
  Vec zero(2);
  zero << 0.0, 1.0;
  EXPECT_THROW(BlockNetwork(zero, Mat::Identity(2, 2)), Error);
  Mat negative = Mat::Identity(2, 2);
  negative(0, 1) = -0.1;
  EXPECT_THROW(BlockNetwork(alpha, negative), Error);
  Mat nan = Mat::Identity(2, 2);
  nan(1, 0) = std::nan("");
  EXPECT_THROW(BlockNetwork(alpha, nan), Error);
}

TEST(Network, UniformAndPairwiseNetworks) {
  EXPECT_THROW(UniformNetwork(1.5), Error);
  EXPECT_THROW(UniformNetwork(-0.1), Error);
  const BlockNetwork net = UniformNetwork(0.4).as_block();
  EXPECT_EQ(net.m(), 1);
  EXPECT_DOUBLE_EQ(net.E()(0, 0), 0.4);
  Mat G = Mat::Zero(2, 2);
  G(0, 1) = 0.3;
  EXPECT_NO_THROW(PairwiseNetwork{G});
  G(0, 0) = 0.1;
  EXPECT_THROW(PairwiseNetwork{G}, Error);
}

TEST(Network, MeasuresOfUniformNetwork) {
  const NetworkMeasures m = compute_measures(BlockNetwork::uniform(0.4));
  EXPECT_NEAR(m.s_sum, 2.5, 1e-14);
  EXPECT_NEAR(m.network_effect, 0.4, 1e-14);
}

TEST(Network, MeasuresMatchExplicitInverse) {
  Vec alpha(3);
  alpha << 0.2, 0.3, 0.5;
  Mat E(3, 3);
  E << 0.5, 0.1, 0.1, 0.2, 0.6, 0.1, 0.1, 0.1, 0.4;
  const NetworkMeasures m = compute_measures(BlockNetwork(alpha, E));
  const Mat inv = E.inverse();
  EXPECT_NEAR(m.s_sum, inv.sum(), 1e-12);
  EXPECT_NEAR(m.network_effect, 1.0 / inv.sum(), 1e-12);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(m.e_inv_ones[i], inv.row(i).sum(), 1e-12);
}

TEST(Network, SingularExternalityIsReported) {
  Vec alpha(2);
  alpha << 0.5, 0.5;
  const BlockNetwork net(alpha, Mat::Ones(2, 2));
  EXPECT_THROW(compute_measures(net), Error);
  const ValidationReport report = check_assumption2(net);
  EXPECT_FALSE(report.passed());
  EXPECT_FALSE(condition(report, "invertible").passed);
}

TEST(Network, Assumption2Conditions) {
  EXPECT_TRUE(check_assumption2(BlockNetwork::uniform(0.5)).passed());
  Vec alpha(2);
  alpha << 0.5, 0.5;
  Mat strong(2, 2);
  strong << 3, 0, 0, 3;
  const ValidationReport small_s = check_assumption2(BlockNetwork(alpha, strong));
  EXPECT_FALSE(condition(small_s, "s_sum_at_least_one").passed);
  EXPECT_NEAR(*condition(small_s, "s_sum_at_least_one").value, 2.0 / 3.0, 1e-12);
  Mat lopsided(2, 2);
  lopsided << 1.0, 2.0, 0.0, 1.0;
  const ValidationReport negative = check_assumption2(BlockNetwork(alpha, lopsided));
  EXPECT_FALSE(condition(negative, "e_inv_ones_nonnegative").passed);
  EXPECT_FALSE(negative.summary().empty());
  EXPECT_NE(negative.first_failure(), nullptr);
}

TEST(Network, Assumption3ForPowerDistributions) {
  const BlockNetwork net = BlockNetwork::uniform(0.5);
  EXPECT_TRUE(check_assumption3(net, UniformDistribution{}).passed());
  EXPECT_TRUE(check_assumption3(net, PowerDistribution{2.0}).passed());
  const ValidationReport weak = check_assumption3(BlockNetwork::uniform(0.5), PowerDistribution{0.5});
  EXPECT_FALSE(weak.passed());
}

TEST(Network, Assumption3RejectsVanishingDensityInside) {
  FunctionDistribution gap(
      "gap", [](double x) { return x < 0.5 ? x : 0.5; }, [](double x) { return x < 0.5 ? 1.0 : 0.0; },
      [](double) { return 0.0; });
  EXPECT_THROW(check_assumption3(BlockNetwork::uniform(0.5), gap), Error);
}

TEST(Network, BonacichCentrality) {
  Mat E(2, 2);
  E << 0, 1, 1, 0;
  const Vec b = bonacich(E, 0.5);
  EXPECT_NEAR(b[0], 2.0, 1e-12);
  EXPECT_NEAR(b[1], 2.0, 1e-12);
}

TEST(Network, FamilyMatricesAndAsymmetry) {
  for (const char* family : {"star", "chain", "ring"}) {
    const Mat C = family_matrix(family, 10, 30.0);
    EXPECT_NEAR(C.sum(), 30.0, 1e-12) << family;
    EXPECT_NEAR(C.diagonal().cwiseAbs().sum(), 0.0, 0.0) << family;
  }
  EXPECT_NEAR(asymmetry(family_matrix("star", 10, 30.0)), 0.0, 1e-12);
  EXPECT_NEAR(asymmetry(family_matrix("chain", 10, 30.0)), 800.0 / 9.0, 1e-10);
  EXPECT_NEAR(asymmetry(family_matrix("ring", 10, 30.0)), 90.0, 1e-10);
  const Mat both = family_matrix("ring", 10, 30.0, EdgeOrientation::Bidirectional);
  EXPECT_TRUE(both.isApprox(both.transpose()));
  EXPECT_THROW(family_matrix("tree", 10, 30.0), Error);
}

TEST(Network, TaylorExpansionErrorIsThirdOrder) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int m = 4;
  Mat C = Mat::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i != j) C(i, j) = unit(rng);
    }
  }
  for (int T : {1, 2, 5}) {
    double previous_error = 0.0;
    for (double delta : {0.04, 0.02, 0.01}) {
      const Mat E = Mat::Identity(m, m) + delta * C;
      const double error = std::abs(taylor_revenue(C, T, delta) - exact_block_revenue(E, T));
      EXPECT_LT(error, 50.0 * delta * delta * delta) << "T=" << T;
      if (previous_error > 1e-14) EXPECT_GT(previous_error / error, 6.0) << "T=" << T;
      previous_error = error;
    }
  }
}

TEST(Network, TaylorAtSingleRoundIsQuarter) {
  const Mat C = family_matrix("ring", 10, 30.0);
  EXPECT_DOUBLE_EQ(taylor_revenue(C, 1, 0.29), 0.25);
}

TEST(Network, RandomFixtureNetsSatisfyAssumption2) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const BlockNetwork net = fixtures::random_valid_net(rng);
    EXPECT_TRUE(check_assumption2(net).passed());
  }
}
