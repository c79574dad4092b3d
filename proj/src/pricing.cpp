#include "netprice/pricing.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <vector>

#include "netprice/equilibrium.hpp"
#include "netprice/error.hpp"
#include "netprice/objectives.hpp"

namespace netprice {

namespace {

void require_rounds(int T) {
  if (T < 1) throw Error(ErrorKind::InvalidParameter, fmt::format("T = {} must be at least 1", T));
}

double require_assumption2(const BlockNetwork& net) {
  const ValidationReport report = check_assumption2(net);
  if (!report.passed()) throw Error(ErrorKind::AssumptionViolated, report.summary());
  return *report.conditions[1].value;
}

bool thresholds_monotone(const ThresholdSchedule& sched) {
  for (int t = 1; t <= sched.T(); ++t) {
    for (int i = 0; i < sched.m(); ++i) {
      if (sched.at(t, i) > sched.at(t + 1, i) + 1e-12) return false;
    }
  }
  return true;
}

void attach_threshold_outputs(PolicyReport& report, const BlockNetwork& net,
                              const ValuationDistribution& dist, bool with_welfare) {
  try {
    ThresholdSchedule sched = thresholds_for_prices(net, dist, report.path);
    if (sched.clamped) report.warnings.push_back("ClampedThresholds");
    if (!thresholds_monotone(sched)) report.warnings.push_back("NonMonotoneThresholds");
    report.adoption = adoption_from_thresholds(net, dist, sched);
    if (with_welfare) report.welfare = welfare_from_thresholds(net, dist, sched);
    report.thresholds = std::move(sched);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InfeasibleThresholds) throw;
    report.warnings.push_back("InfeasibleThresholds");
  }
}

}  // namespace

PolicyReport uniform_policy(double g, int T) {
  if (!(g >= 0.0 && g <= 1.0)) {
    throw Error(ErrorKind::InvalidParameter, fmt::format("g = {} is not in [0,1]", g));
  }
  require_rounds(T);
  const double t_rounds = T;
  const double D = 2.0 * t_rounds - g * (t_rounds - 1.0);
  Vec chronological(T);
  ThresholdSchedule sched;
  sched.v = Mat::Ones(T + 1, 1);
  for (int t = 1; t <= T; ++t) {
    chronological[T - t] = ((t_rounds - t) * g + t_rounds - g * (t_rounds - 1.0)) / D;
    sched.v(t - 1, 0) = (t == 1) ? (t_rounds - g * (t_rounds - 1.0)) / D : 1.0 - (t_rounds + 1.0 - t) / D;
  }
  PolicyReport report;
  report.path = PricePath::scalar(chronological);
  report.normalized_revenue = t_rounds / (4.0 * t_rounds - 2.0 * g * (t_rounds - 1.0));
  report.welfare = t_rounds * (1.5 * t_rounds - 0.5 * g * (t_rounds - 1.0)) / (D * D);
  Mat adoption(T, 1);
  for (int r = 1; r <= T; ++r) adoption(r - 1, 0) = 1.0 - sched.v(T - r, 0);
  report.adoption = adoption;
  report.thresholds = sched;
  return report;
}

int rounds_to_fraction(double g, double q) {
  if (!(g > 0.0 && g <= 1.0)) throw Error(ErrorKind::InvalidParameter, "g must lie in (0,1]");
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorKind::InvalidParameter, "q must lie in (0,1)");
  const double rounds = q / (1.0 - q) * g / (2.0 - g);
  return static_cast<int>(std::ceil(rounds - 1e-12));
}

Vec block_prices(double s_sum, int T) {
  require_rounds(T);
  const double t_rounds = T;
  const double D = 2.0 * t_rounds * s_sum - (t_rounds - 1.0);
  Vec chronological(T);
  for (int t = 1; t <= T; ++t) {
    chronological[T - t] = (t_rounds - t) / D + (t_rounds * s_sum - (t_rounds - 1.0)) / D;
  }
  return chronological;
}

Vec block_prices_alternate(double s_sum, int T) {
  require_rounds(T);
  const double t_rounds = T;
  const double D = 2.0 * t_rounds * s_sum - (t_rounds - 1.0);
  Vec chronological(T);
  for (int t = 1; t <= T; ++t) chronological[T - t] = (t_rounds * s_sum - t + 1.0) / D;
  return chronological;
}

double block_revenue(double s_sum, int T) {
  require_rounds(T);
  const double t_rounds = T;
  return s_sum * t_rounds / (4.0 * t_rounds * s_sum - 2.0 * (t_rounds - 1.0));
}

double block_welfare(double s_sum, int T) {
  require_rounds(T);
  const double ts = T * s_sum;
  const double D = 2.0 * ts - (T - 1.0);
  return ts / (D * D) * (1.5 * ts - 0.5 * (T - 1.0));
}

PolicyReport block_policy(const BlockNetwork& net, int T) {
  require_rounds(T);
  const double S = require_assumption2(net);
  const Vec e_inv_ones = solve(net.E(), ones(net.m()));
  const double t_rounds = T;
  const double D = 2.0 * t_rounds * S - (t_rounds - 1.0);

  PolicyReport report;
  report.path = PricePath::scalar(block_prices(S, T));
  report.normalized_revenue = block_revenue(S, T);
  report.welfare = block_welfare(S, T);

  ThresholdSchedule sched;
  sched.v = Mat::Ones(T + 1, net.m());
  const Vec waiting_share = e_inv_ones.cwiseQuotient(net.alpha());
  for (int t = 2; t <= T; ++t) {
    sched.v.row(t - 1) = (Vec::Ones(net.m()) - (t_rounds + 1.0 - t) / D * waiting_share).transpose();
  }
  sched.v.row(0).setConstant((S * t_rounds - (t_rounds - 1.0)) / D);
  if ((sched.v.array() < 0.0).any() || (sched.v.array() > 1.0).any()) {
    report.warnings.push_back("NonInteriorThresholds");
  }
  if (!thresholds_monotone(sched)) report.warnings.push_back("NonMonotoneThresholds");
  const UniformDistribution uniform;
  report.adoption = adoption_from_thresholds(net, uniform, sched);
  report.thresholds = sched;
  return report;
}

namespace {

struct RootCandidate {
  double p;
  double revenue;
};

}  // namespace

PolicyReport nonuniform_policy(const BlockNetwork& net, const ValuationDistribution& dist, int T) {
  require_rounds(T);
  const ValidationReport a2 = check_assumption2(net);
  if (!a2.passed()) throw Error(ErrorKind::AssumptionViolated, a2.summary());
  const ValidationReport a3 = check_assumption3(net, dist);
  if (!a3.passed()) throw Error(ErrorKind::AssumptionViolated, a3.summary());
  const double S = *a2.conditions[1].value;
  const double t_rounds = T;
  const double c = (t_rounds - 1.0) / (t_rounds * S);

  auto h = [&](double p) {
    const double density = dist.pdf(p);
    return p - (1.0 - dist.cdf(p)) * (1.0 / density - c);
  };
  auto rounds_slope = [&](double pT) { return (1.0 - dist.cdf(pT)) / (t_rounds * S); };
  auto path_for = [&](double pT) {
    Vec by_remaining(T);
    for (int t = 1; t <= T; ++t) by_remaining[t - 1] = (t_rounds - t) * rounds_slope(pT) + pT;
    return PricePath::from_remaining(by_remaining);
  };

  constexpr int kScan = 1001;
  constexpr double kEdge = 1e-12;
  constexpr double kRootTolerance = 1e-10;
  std::vector<double> grid(kScan);
  std::vector<double> values(kScan);
  for (int k = 0; k < kScan; ++k) {
    grid[k] = kEdge + (1.0 - 2.0 * kEdge) * k / (kScan - 1);
    values[k] = h(grid[k]);
  }

  std::vector<RootCandidate> roots;
  const double spacing = 1.0 / (kScan - 1);
  auto record = [&](double p) {
    if (!roots.empty() && std::abs(p - roots.back().p) <= 2.0 * spacing) return;
    roots.push_back({p, objectives::nonuniform(S, dist, path_for(p).prices().col(0))});
  };
  for (int k = 0; k < kScan; ++k) {
    const double a = values[k];
    if (std::isnan(a)) continue;
    if (std::abs(a) <= kRootTolerance) {
      record(grid[k]);
      continue;
    }
    if (k + 1 == kScan) break;
    const double b = values[k + 1];
    if (std::isnan(b) || std::abs(b) <= kRootTolerance || (a < 0.0) == (b < 0.0)) continue;
    double lo = grid[k];
    double hi = grid[k + 1];
    const bool rising = a < 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((h(mid) < 0.0) == rising) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    record(0.5 * (lo + hi));
  }
  if (roots.empty()) {
    throw Error(ErrorKind::NoRoot, "p - (1-F(p))(1/f(p) - (T-1)/(TS)) has no sign change on [0,1]");
  }

  RootCandidate best = roots.front();
  for (const auto& candidate : roots) {
    if (candidate.revenue > best.revenue) best = candidate;
  }

  PolicyReport report;
  if (roots.size() > 1) report.warnings.push_back("MultipleRoots");
  const double pT = best.p;
  const double tail = 1.0 - dist.cdf(pT);
  report.path = path_for(pT);
  report.normalized_revenue = tail * ((t_rounds - 1.0) / (2.0 * t_rounds) / S * tail + pT);
  report.extras["fixed_point_residual"] = h(pT);
  attach_threshold_outputs(report, net, dist, true);
  return report;
}

PolicyReport discrimination_policy(const BlockNetwork& net, int T) {
  require_rounds(T);
  require_assumption2(net);
  const int m = net.m();
  const Mat I = Mat::Identity(m, m);
  const Mat e_inv = solve(net.E(), I);
  const double min_eig = min_sym_eigenvalue(e_inv - net.A());
  if (min_eig < -1e-10) {
    throw Error(ErrorKind::AssumptionViolated,
                fmt::format("E^-1 - A is not positive semidefinite (min eigenvalue {:.12g})", min_eig));
  }
  const double t_rounds = T;
  const Mat EA = net.EA();
  const Mat inner = I - (t_rounds - 1.0) / t_rounds * EA;
  const Mat weighted = solve(inner, EA);
  const Vec pT = solve(Mat(EA + weighted), Vec(EA * Vec::Ones(m)));
  const Vec increment = weighted * pT / t_rounds;

  Mat chronological(T, m);
  for (int t = 1; t <= T; ++t) chronological.row(T - t) = (pT + (t_rounds - t) * increment).transpose();

  PolicyReport report;
  report.path = PricePath::per_group(chronological);
  report.normalized_revenue = objectives::discrimination(e_inv, net.alpha(), chronological);
  if (!net.E().isApprox(net.E().transpose(), 1e-12)) report.warnings.push_back("NonSymmetricE");
  const UniformDistribution uniform;
  attach_threshold_outputs(report, net, uniform, true);
  return report;
}

PolicyReport static_policy(const BlockNetwork& net) {
  const int m = net.m();
  const Mat I = Mat::Identity(m, m);
  const Mat Q = net.A() * solve(I - net.EA(), I);
  const Vec p = solve(Mat(Q + Q.transpose()), Vec(Q * Vec::Ones(m)));
  PolicyReport report;
  report.path = PricePath::per_group(p.transpose());
  report.normalized_revenue = p.dot(Q * Vec::Ones(m)) - p.dot(Q * p);
  return report;
}

double no_commitment_bound() { return (3.0 + std::sqrt(13.0)) / 2.0; }

double no_commitment_second_price(double g, double first_round_share) {
  const double p2 = (1.0 + 3.0 * g - 2.0 * g * g) / (2.0 * (1.0 + 4.0 * g - g * g));
  return g / 2.0 * first_round_share + (2.0 * p2 + g) / (2.0 * (1.0 + g));
}

PolicyReport no_commitment_two_period(double g) {
  if (!(g >= 0.0 && g <= no_commitment_bound())) {
    throw Error(ErrorKind::InvalidParameter,
                fmt::format("g = {} is outside [0, (3+sqrt(13))/2]", g));
  }
  const double p2 = (1.0 + 3.0 * g - 2.0 * g * g) / (2.0 * (1.0 + 4.0 * g - g * g));
  const double v2 = (2.0 * p2 + g) / (1.0 + g);
  const double share = 1.0 - v2;
  const double second = no_commitment_second_price(g, share);

  PolicyReport report;
  Vec chronological(2);
  chronological << p2, second;
  report.path = PricePath::scalar(chronological);
  report.normalized_revenue = (1.0 + 4.0 * g) / (4.0 * (1.0 + 4.0 * g - g * g));
  const double commitment = 1.0 / (4.0 - g);
  report.extras["second_price_base"] = (2.0 * p2 + g) / (2.0 * (1.0 + g));
  report.extras["second_price_slope"] = g / 2.0;
  report.extras["first_round_share"] = share;
  report.extras["first_round_threshold"] = v2;
  report.extras["commitment_revenue"] = commitment;
  report.extras["commitment_gap"] = commitment - report.normalized_revenue;
  return report;
}

Vec all_sales_mass_sequence(const BlockNetwork& net, int count) {
  Vec s(count);
  Vec power = Vec::Ones(net.m());
  const Mat EA = net.EA();
  for (int t = 0; t < count; ++t) {
    s[t] = net.alpha().dot(power);
    power = EA * power;
  }
  return s;
}

PolicyReport all_sales_policy(const BlockNetwork& net, int T, bool with_limit) {
  require_rounds(T);
  const Vec s = all_sales_mass_sequence(net, T);
  for (int t = 1; t < T; ++t) {
    if (s[t] > s[t - 1] + 1e-10) {
      throw Error(ErrorKind::ConditionViolated,
                  fmt::format("alpha'(EA)^t 1 increases at t = {} ({:.12g} > {:.12g})", t, s[t], s[t - 1]));
    }
  }
  const Mat EA = net.EA();
  Vec acc = Vec::Ones(net.m());
  for (int k = 1; k < T; ++k) acc = Vec::Ones(net.m()) + EA * acc;

  PolicyReport report;
  report.path = PricePath::scalar(Vec::Constant(T, 0.5));
  report.normalized_revenue = 0.25 * net.alpha().dot(acc);
  if (with_limit) {
    const double radius = spectral_radius(EA);
    if (!(radius < 1.0)) {
      throw Error(ErrorKind::SpectralRadiusTooLarge,
                  fmt::format("spectral radius of EA is {:.12g}, the infinite-horizon sum diverges", radius));
    }
    const Mat I = Mat::Identity(net.m(), net.m());
    report.extras["limit_revenue"] = 0.25 * net.alpha().dot(solve(Mat(I - EA), ones(net.m())));
  }
  return report;
}

}  // namespace netprice
