#include "netprice/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fmt/format.h>
#include <numeric>
#include <optional>
#include <thread>

#include "netprice/equilibrium.hpp"
#include "netprice/error.hpp"
#include "netprice/pricing.hpp"

namespace netprice {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct MeanAndError {
  double mean = 0.0;
  double standard_error = 0.0;
};

MeanAndError summarize(const std::vector<double>& values) {
  MeanAndError out;
  const auto count = static_cast<double>(values.size());
  if (values.empty()) return out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / count;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.standard_error = std::sqrt(ss / (count - 1.0) / count);
  }
  return out;
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const std::uint64_t h = splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::vector<int> group_sizes(const Vec& alpha, int n) {
  const auto m = static_cast<std::size_t>(alpha.size());
  std::vector<int> sizes(m);
  std::vector<double> remainder(m);
  int assigned = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double exact = alpha[static_cast<Eigen::Index>(i)] * n;
    sizes[i] = static_cast<int>(std::floor(exact + 1e-9));
    remainder[i] = exact - sizes[i];
    assigned += sizes[i];
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < n; ++k) {
    ++sizes[order[k % m]];
    ++assigned;
  }
  return sizes;
}

Market sample_market(const BlockNetwork& net, const ValuationDistribution& dist, int n, std::uint64_t seed,
                     std::uint64_t stream) {
  if (n < net.m()) {
    throw Error(ErrorKind::InvalidParameter, fmt::format("n = {} is smaller than the {} groups", n, net.m()));
  }
  Market market{net, n, group_sizes(net.alpha(), n), {}, Vec(n)};
  market.group_of.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < net.m(); ++i) market.group_of.insert(market.group_of.end(), market.group_sizes[i], i);
  for (int b = 0; b < n; ++b) {
    market.valuations[b] = std::clamp(dist.inverse_cdf(counter_uniform(seed, stream, static_cast<std::uint64_t>(b))), 0.0, 1.0);
  }
  return market;
}

SimulationReport run_market(const Market& market, const PricePath& path, const ThresholdSchedule& sched,
                            FinalRoundRule rule) {
  const int m = market.net.m();
  const int T = path.T();
  if (sched.m() != m || sched.T() != T) {
    throw Error(ErrorKind::ShapeMismatch,
                fmt::format("schedule is {}x{} but the market needs {} rounds and {} groups", sched.T(), sched.m(), T, m));
  }
  if (path.is_per_group() && path.columns() != m) {
    throw Error(ErrorKind::ShapeMismatch, "per-group path width does not match the market");
  }
  if (static_cast<int>(market.group_of.size()) != market.n || market.valuations.size() != market.n) {
    throw Error(ErrorKind::ShapeMismatch, "market buyer arrays do not match n");
  }
  const Mat& E = market.net.E();
  const double n = market.n;

  SimulationReport report;
  report.per_round_counts = Eigen::MatrixXi::Zero(T, m);
  std::vector<char> bought(static_cast<std::size_t>(market.n), 0);
  Vec cumulative = Vec::Zero(m);
  double revenue = 0.0;
  double welfare = 0.0;
  for (int r = 1; r <= T; ++r) {
    const int t = T + 1 - r;
    const Vec externality = E * cumulative / n;
    Vec cutoff(m);
    for (int i = 0; i < m; ++i) {
      cutoff[i] = sched.at(t, i);
      if (r == T && rule == FinalRoundRule::Realized) {
        cutoff[i] = std::clamp(path.at_round(r, i) - externality[i], 0.0, 1.0);
      }
    }
    Vec value_sum = Vec::Zero(m);
    for (int b = 0; b < market.n; ++b) {
      if (bought[b]) continue;
      const int group = market.group_of[b];
      if (market.valuations[b] >= cutoff[group]) {
        bought[b] = 1;
        ++report.per_round_counts(r - 1, group);
        value_sum[group] += market.valuations[b];
      }
    }
    for (int i = 0; i < m; ++i) {
      const double count = report.per_round_counts(r - 1, i);
      revenue += path.at_round(r, i) * count;
      welfare += value_sum[i] + count * externality[i];
      cumulative[i] += count;
    }
  }
  report.never_buyers = market.n - static_cast<long long>(report.per_round_counts.sum());
  report.realized_revenue = revenue / n;
  report.realized_welfare = welfare / n;
  report.stats.mean = report.realized_revenue;
  report.stats.welfare_mean = report.realized_welfare;
  report.stats.replications = 1;
  report.replication_revenues = {report.realized_revenue};
  report.replication_welfares = {report.realized_welfare};
  return report;
}

SimulationReport monte_carlo(const BlockNetwork& net, const ValuationDistribution& dist, const PricePath& path,
                             int n, int reps, std::uint64_t seed, const MonteCarloOptions& options) {
  if (reps < 2) throw Error(ErrorKind::InvalidParameter, "Monte Carlo needs at least two replications");
  if (n < net.m()) throw Error(ErrorKind::InvalidParameter, "n must be at least the number of groups");
  const ThresholdSchedule sched = thresholds_for_prices(net, dist, path);

  std::vector<std::optional<SimulationReport>> runs(static_cast<std::size_t>(reps));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int rep = next.fetch_add(1); rep < reps; rep = next.fetch_add(1)) {
      const Market market = sample_market(net, dist, n, seed, static_cast<std::uint64_t>(rep));
      runs[static_cast<std::size_t>(rep)] = run_market(market, path, sched, options.rule);
    }
  };
  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = std::min<unsigned>(threads, static_cast<unsigned>(reps));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
  }

  SimulationReport report;
  report.per_round_counts = Eigen::MatrixXi::Zero(path.T(), net.m());
  for (const auto& run : runs) {
    report.per_round_counts += run->per_round_counts;
    report.never_buyers += run->never_buyers;
    report.replication_revenues.push_back(run->realized_revenue);
    report.replication_welfares.push_back(run->realized_welfare);
  }
  const MeanAndError revenue = summarize(report.replication_revenues);
  const MeanAndError welfare = summarize(report.replication_welfares);
  report.realized_revenue = revenue.mean;
  report.realized_welfare = welfare.mean;
  report.stats = {revenue.mean, revenue.standard_error, welfare.mean, welfare.standard_error, reps, seed};
  return report;
}

std::vector<ConvergenceRow> convergence_study(const BlockNetwork& net, const ValuationDistribution& dist, int T,
                                              const std::vector<int>& n_list, int reps, std::uint64_t seed,
                                              const MonteCarloOptions& options) {
  if (n_list.empty()) throw Error(ErrorKind::InvalidParameter, "n_list must not be empty");
  if (!std::is_sorted(n_list.begin(), n_list.end()) ||
      std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end()) {
    throw Error(ErrorKind::InvalidParameter, "n_list must be strictly ascending");
  }
  const bool uniform = dynamic_cast<const UniformDistribution*>(&dist) != nullptr;
  const PolicyReport policy = uniform ? block_policy(net, T) : nonuniform_policy(net, dist, T);
  const double welfare_limit = policy.welfare ? *policy.welfare : limit_welfare_of_path(net, dist, policy.path);

  std::vector<ConvergenceRow> rows;
  for (int n : n_list) {
    const SimulationReport sim = monte_carlo(net, dist, policy.path, n, reps, seed, options);
    ConvergenceRow row;
    row.n = n;
    row.mean = sim.stats.mean;
    row.standard_error = sim.stats.standard_error;
    row.closed_form = policy.normalized_revenue;
    row.abs_error = std::abs(row.mean - row.closed_form);
    double ss = 0.0;
    for (double r : sim.replication_revenues) ss += (r - row.closed_form) * (r - row.closed_form);
    row.rmse = std::sqrt(ss / static_cast<double>(sim.replication_revenues.size()));
    row.welfare_mean = sim.stats.welfare_mean;
    row.welfare_closed_form = welfare_limit;
    row.welfare_abs_error = std::abs(row.welfare_mean - welfare_limit);
    rows.push_back(row);
  }
  return rows;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::InvalidParameter, "need at least two points");
  double mx = 0.0, my = 0.0;
  const auto count = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error(ErrorKind::InvalidParameter, "log-log slope needs positive values");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= count;
  my /= count;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace netprice
