#pragma once

#include <cstdint>
#include <vector>

#include "netprice/distribution.hpp"
#include "netprice/network.hpp"
#include "netprice/types.hpp"

namespace netprice {

/** A finite market: buyers sorted by group, with group sizes from largest-remainder rounding. */
struct Market {
  BlockNetwork net;
  int n = 0;
  std::vector<int> group_sizes;
  std::vector<int> group_of;
  Vec valuations;
};

/** How last-round buyers decide. */
enum class FinalRoundRule {
  /** Use the precomputed limiting cutoff. */
  Scheduled,
  /** Best-respond to the realized externality: buy iff v ≥ clamp(p − Σ_j E_ij k_j / n). */
  Realized,
};

struct ReplicationStats {
  double mean = 0.0;
  double standard_error = 0.0;
  double welfare_mean = 0.0;
  double welfare_standard_error = 0.0;
  int replications = 0;
  std::uint64_t seed = 0;
};

struct SimulationReport {
  /** T×m purchase counts in chronological rounds; summed over replications for Monte Carlo runs. */
  Eigen::MatrixXi per_round_counts;
  long long never_buyers = 0;
  /** Revenue divided by n; the replication mean for Monte Carlo runs. */
  double realized_revenue = 0.0;
  double realized_welfare = 0.0;
  ReplicationStats stats;
  std::vector<double> replication_revenues;
  std::vector<double> replication_welfares;
};

/** floor(α_i n) with remainders assigned to the largest fractional parts, ties to lower index. */
std::vector<int> group_sizes(const Vec& alpha, int n);

/** Uniform in [0,1) from a counter-based hash of (seed, stream, index). */
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/** Deterministic market; `stream` separates replications drawn from the same seed. */
Market sample_market(const BlockNetwork& net, const ValuationDistribution& dist, int n, std::uint64_t seed,
                     std::uint64_t stream = 0);

SimulationReport run_market(const Market& market, const PricePath& path, const ThresholdSchedule& sched,
                            FinalRoundRule rule = FinalRoundRule::Scheduled);

struct MonteCarloOptions {
  FinalRoundRule rule = FinalRoundRule::Scheduled;
  /** Worker threads; 0 picks the hardware concurrency. */
  unsigned threads = 0;
};

/** Independent replications with cutoffs from the limiting equilibrium of `path`. */
SimulationReport monte_carlo(const BlockNetwork& net, const ValuationDistribution& dist, const PricePath& path,
                             int n, int reps, std::uint64_t seed, const MonteCarloOptions& options = {});

struct ConvergenceRow {
  int n = 0;
  double mean = 0.0;
  double standard_error = 0.0;
  double closed_form = 0.0;
  double abs_error = 0.0;
  /** Root-mean-square deviation of per-replication revenue from the closed form. */
  double rmse = 0.0;
  double welfare_mean = 0.0;
  double welfare_closed_form = 0.0;
  double welfare_abs_error = 0.0;
};

/**
 * Simulates the optimal committed policy for (net, dist, T) at each n. The policy is the
 * block policy for the uniform distribution and the fixed-point policy otherwise.
 */
std::vector<ConvergenceRow> convergence_study(const BlockNetwork& net, const ValuationDistribution& dist, int T,
                                              const std::vector<int>& n_list, int reps, std::uint64_t seed,
                                              const MonteCarloOptions& options = {});

/** Least-squares slope of log(y) against log(x). */
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace netprice
