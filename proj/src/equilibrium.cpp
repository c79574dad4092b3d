#include "netprice/equilibrium.hpp"

#include <algorithm>
#include <fmt/format.h>

#include "netprice/error.hpp"

namespace netprice {

namespace {

constexpr double kFeasibilitySlack = 1e-8;

void require_compatible(const BlockNetwork& net, const PricePath& path) {
  if (path.is_per_group() && path.columns() != net.m()) {
    throw Error(ErrorKind::ShapeMismatch,
                fmt::format("path has {} price columns but the network has {} groups", path.columns(),
                            net.m()));
  }
}

void require_nondecreasing(const PricePath& path) {
  for (int r = 2; r <= path.T(); ++r) {
    for (int c = 0; c < path.columns(); ++c) {
      if (path.prices()(r - 1, c) < path.prices()(r - 2, c) - 1e-12) {
        throw Error(ErrorKind::NonMonotonePath,
                    fmt::format("price falls from {:.12g} to {:.12g} at round {}",
                                path.prices()(r - 2, c), path.prices()(r - 1, c), r));
      }
    }
  }
}

double checked_clamp(double value, int t, int group, bool& clamped) {
  if (value < -kFeasibilitySlack || value > 1.0 + kFeasibilitySlack) {
    throw Error(ErrorKind::InfeasibleThresholds,
                fmt::format("cutoff for group {} with {} rounds remaining is {:.12g}", group, t, value));
  }
  const double result = std::clamp(value, 0.0, 1.0);
  if (result != value) clamped = true;
  return result;
}

}  // namespace

ThresholdSchedule thresholds_for_prices(const BlockNetwork& net, const ValuationDistribution& dist,
                                        const PricePath& path) {
  require_compatible(net, path);
  require_nondecreasing(path);
  const int T = path.T();
  const int m = net.m();
  const Mat EA = net.EA();

  ThresholdSchedule sched;
  sched.v = Mat::Ones(T + 1, m);
  Vec F_next = Vec::Ones(m);
  for (int t = T; t >= 2; --t) {
    const Vec step = path.remaining_vector(t - 1, m) - path.remaining_vector(t, m);
    Vec F_t = F_next;
    if (!step.isZero(0.0)) F_t -= solve(EA, step);
    for (int i = 0; i < m; ++i) {
      F_t[i] = checked_clamp(F_t[i], t, i, sched.clamped);
      sched.v(t - 1, i) = dist.inverse_cdf(F_t[i]);
    }
    F_next = F_t;
  }
  const Vec v1 = path.remaining_vector(1, m) - EA * (Vec::Ones(m) - F_next);
  for (int i = 0; i < m; ++i) sched.v(0, i) = checked_clamp(v1[i], 1, i, sched.clamped);
  return sched;
}

std::optional<int> buyer_purchase_round(double valuation, int group, const ThresholdSchedule& sched) {
  const int T = sched.T();
  for (int r = 1; r <= T; ++r) {
    if (valuation >= sched.at(T + 1 - r, group)) return r;
  }
  return std::nullopt;
}

double limit_revenue_of_path(const BlockNetwork& net, const ValuationDistribution& dist,
                             const PricePath& path) {
  const ThresholdSchedule sched = thresholds_for_prices(net, dist, path);
  const int m = net.m();
  double revenue = 0.0;
  for (int t = 1; t <= path.T(); ++t) {
    const Vec p = path.remaining_vector(t, m);
    for (int i = 0; i < m; ++i) {
      const double mass = dist.cdf(sched.at(t + 1, i)) - dist.cdf(sched.at(t, i));
      revenue += p[i] * net.alpha()[i] * mass;
    }
  }
  return revenue;
}

double welfare_from_thresholds(const BlockNetwork& net, const ValuationDistribution& dist,
                               const ThresholdSchedule& sched) {
  const int m = net.m();
  if (sched.m() != m) throw Error(ErrorKind::ShapeMismatch, "schedule width does not match network");
  const Mat EA = net.EA();
  double welfare = 0.0;
  for (int t = 1; t <= sched.T(); ++t) {
    Vec bought_before(m);
    for (int j = 0; j < m; ++j) bought_before[j] = 1.0 - dist.cdf(sched.at(t + 1, j));
    const Vec externality = EA * bought_before;
    for (int i = 0; i < m; ++i) {
      const double lo = sched.at(t, i);
      const double hi = sched.at(t + 1, i);
      const double mass = dist.cdf(hi) - dist.cdf(lo);
      welfare += net.alpha()[i] * (dist.partial_expectation(lo, hi) + mass * externality[i]);
    }
  }
  return welfare;
}

double limit_welfare_of_path(const BlockNetwork& net, const ValuationDistribution& dist,
                             const PricePath& path) {
  return welfare_from_thresholds(net, dist, thresholds_for_prices(net, dist, path));
}

Mat adoption_from_thresholds(const BlockNetwork& net, const ValuationDistribution& dist,
                             const ThresholdSchedule& sched) {
  const int T = sched.T();
  const int m = net.m();
  Mat adoption(T, m);
  for (int r = 1; r <= T; ++r) {
    const int t = T + 1 - r;
    for (int i = 0; i < m; ++i) {
      adoption(r - 1, i) = net.alpha()[i] * (1.0 - dist.cdf(sched.at(t, i)));
    }
  }
  return adoption;
}

}  // namespace netprice
