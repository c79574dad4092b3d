#pragma once

#include <algorithm>
#include <random>
#include <string>

#include "netprice/error.hpp"
#include "netprice/network.hpp"
#include "netprice/pricing.hpp"

namespace netprice::fixtures {

struct NetRequirements {
  int max_m = 5;
  int max_T = 6;
  bool symmetric = false;
  /** Also require E⁻¹ − A to be positive semidefinite. */
  bool discrimination = false;
  /** When set, also require the distribution conditions and a solvable fixed point for this distribution. */
  const ValuationDistribution* dist = nullptr;
};

inline bool has_warning(const PolicyReport& report, const std::string& name) {
  return std::find(report.warnings.begin(), report.warnings.end(), name) != report.warnings.end();
}

/** E = c(I + δC) with random non-negative C, rejection-sampled until every requirement holds. */
inline BlockNetwork random_valid_net(std::mt19937_64& rng, const NetRequirements& req = {}) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> group_count(1, req.max_m);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const int m = group_count(rng);
    Vec alpha(m);
    for (int i = 0; i < m; ++i) alpha[i] = 0.5 + unit(rng);
    alpha /= alpha.sum();
    Mat C = Mat::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        if (i != j) C(i, j) = unit(rng);
      }
    }
    if (req.symmetric) C = 0.5 * (C + C.transpose()).eval();
    const double delta = 0.4 * unit(rng);
    const double scale = 0.3 + 0.9 * unit(rng);
    const Mat E = scale * (Mat::Identity(m, m) + delta * C);
    try {
      const BlockNetwork net(alpha, E);
      if (!check_assumption2(net).passed()) continue;
      bool interior = true;
      for (int T = 1; T <= req.max_T && interior; ++T) {
        const PolicyReport report = block_policy(net, T);
        interior = !has_warning(report, "NonInteriorThresholds") && !has_warning(report, "NonMonotoneThresholds");
      }
      if (!interior) continue;
      if (req.discrimination) {
        const Mat diff = solve(E, Mat(Mat::Identity(m, m))) - net.A();
        if (min_sym_eigenvalue(diff) < 0.0) continue;
      }
      if (req.dist != nullptr) {
        if (!check_assumption3(net, *req.dist).passed()) continue;
        bool solvable = true;
        for (int T = 1; T <= req.max_T && solvable; ++T) {
          const PolicyReport report = nonuniform_policy(net, *req.dist, T);
          solvable = report.thresholds.has_value() && !report.thresholds->clamped &&
                     !has_warning(report, "NonMonotoneThresholds");
        }
        if (!solvable) continue;
      }
      return net;
    } catch (const Error&) {
      continue;
    }
  }
  throw Error(ErrorKind::InvalidParameter, "no valid network found");
}

/** Small externalities so that αᵀ(EA)^t 1 is non-increasing. */
inline BlockNetwork random_all_sales_net(std::mt19937_64& rng, int max_m, int T) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> group_count(1, max_m);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const int m = group_count(rng);
    Vec alpha(m);
    for (int i = 0; i < m; ++i) alpha[i] = 0.5 + unit(rng);
    alpha /= alpha.sum();
    Mat E(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) E(i, j) = 1.2 * unit(rng);
    }
    const BlockNetwork net(alpha, E);
    const Vec s = all_sales_mass_sequence(net, T);
    bool monotone = true;
    for (int t = 1; t < T; ++t) monotone = monotone && s[t] <= s[t - 1];
    if (monotone) return net;
  }
  throw Error(ErrorKind::InvalidParameter, "no monotone network found");
}

/** Three fixed networks used by the simulation checks. */
inline std::vector<BlockNetwork> simulation_fixture_nets() {
  Vec a2(2);
  a2 << 0.4, 0.6;
  Mat e2(2, 2);
  e2 << 0.6, 0.2, 0.1, 0.5;
  Vec a3(3);
  a3 << 0.3, 0.3, 0.4;
  Mat e3(3, 3);
  e3 << 0.6, 0.1, 0.05, 0.1, 0.5, 0.1, 0.05, 0.1, 0.6;
  return {BlockNetwork::uniform(0.5), BlockNetwork(a2, e2), BlockNetwork(a3, e3)};
}

}  // namespace netprice::fixtures
