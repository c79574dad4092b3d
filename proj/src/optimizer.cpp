#include "netprice/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <functional>
#include <limits>
#include <random>

#include "netprice/error.hpp"
#include "netprice/objectives.hpp"
#include "netprice/pricing.hpp"

namespace netprice {

std::string to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::Uniform: return "uniform";
    case ObjectiveKind::Block: return "block";
    case ObjectiveKind::Nonuniform: return "nonuniform";
    case ObjectiveKind::Discrimination: return "discrimination";
    case ObjectiveKind::AllSalesTwoBuyer: return "all_sales_two_buyer";
  }
  return "unknown";
}

namespace {

void require_rounds(int T) {
  if (T < 1) throw Error(ErrorKind::InvalidParameter, fmt::format("T = {} must be at least 1", T));
}

double s_sum_of(const BlockNetwork& net) { return compute_measures(net).s_sum; }

}  // namespace

ObjectiveSpec ObjectiveSpec::uniform(double g, int T) {
  require_rounds(T);
  if (!(g >= 0.0) || !std::isfinite(g)) throw Error(ErrorKind::InvalidParameter, "g must be non-negative");
  ObjectiveSpec spec;
  spec.kind = ObjectiveKind::Uniform;
  spec.T = T;
  spec.g_eff = g;
  return spec;
}

ObjectiveSpec ObjectiveSpec::block(const BlockNetwork& net, int T) {
  require_rounds(T);
  ObjectiveSpec spec;
  spec.kind = ObjectiveKind::Block;
  spec.T = T;
  spec.net = net;
  spec.g_eff = 1.0 / s_sum_of(net);
  return spec;
}

ObjectiveSpec ObjectiveSpec::nonuniform(const BlockNetwork& net, DistributionPtr dist, int T) {
  require_rounds(T);
  if (!dist) throw Error(ErrorKind::InvalidDistribution, "nonuniform objective needs a distribution");
  ObjectiveSpec spec;
  spec.kind = ObjectiveKind::Nonuniform;
  spec.T = T;
  spec.net = net;
  spec.dist = std::move(dist);
  spec.g_eff = 1.0 / s_sum_of(net);
  return spec;
}

ObjectiveSpec ObjectiveSpec::discrimination(const BlockNetwork& net, int T) {
  require_rounds(T);
  ObjectiveSpec spec;
  spec.kind = ObjectiveKind::Discrimination;
  spec.T = T;
  spec.net = net;
  spec.e_inv = solve(net.E(), Mat(Mat::Identity(net.m(), net.m())));
  return spec;
}

ObjectiveSpec ObjectiveSpec::all_sales_two_buyer(double g) {
  if (!(g >= 0.0 && g <= 1.0)) throw Error(ErrorKind::InvalidParameter, "g must lie in [0,1]");
  ObjectiveSpec spec;
  spec.kind = ObjectiveKind::AllSalesTwoBuyer;
  spec.T = 2;
  spec.g_eff = g;
  return spec;
}

int ObjectiveSpec::columns() const {
  return kind == ObjectiveKind::Discrimination ? net->m() : 1;
}

double evaluate_objective(const ObjectiveSpec& spec, const PricePath& path) {
  if (path.T() != spec.T) {
    throw Error(ErrorKind::ShapeMismatch,
                fmt::format("path has {} rounds but the objective expects {}", path.T(), spec.T));
  }
  const bool scalar_kind = spec.kind != ObjectiveKind::Discrimination;
  if (scalar_kind && path.columns() != 1) {
    throw Error(ErrorKind::ShapeMismatch, "this objective takes a single price per round");
  }
  if (!scalar_kind && path.columns() != 1 && path.columns() != spec.columns()) {
    throw Error(ErrorKind::ShapeMismatch, "discrimination path must have one column per group");
  }
  const Vec p = path.prices().col(0);
  switch (spec.kind) {
    case ObjectiveKind::Uniform: return objectives::uniform(spec.g_eff, p);
    case ObjectiveKind::Block: return objectives::block(1.0 / spec.g_eff, p);
    case ObjectiveKind::Nonuniform: return objectives::nonuniform(1.0 / spec.g_eff, *spec.dist, p);
    case ObjectiveKind::Discrimination:
      return objectives::discrimination(spec.e_inv, spec.net->alpha(), path.prices());
    case ObjectiveKind::AllSalesTwoBuyer: {
      const double first = p[0];
      const double second = p[1];
      if (first > second) return -std::numeric_limits<double>::infinity();
      return objectives::two_buyer_nondecreasing(spec.g_eff, first, second);
    }
  }
  return 0.0;
}

namespace {

constexpr double kFiniteDifferenceStep = 1e-6;

/** A maximization problem over a flat vector with projection and a path mapping. */
struct Problem {
  int dim = 0;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Vec(const Vec&)> project;
  std::function<PricePath(const Vec&)> to_path;
  double tolerance = 1e-10;
};

Vec clip01(const Vec& x) { return x.cwiseMax(0.0).cwiseMin(1.0); }

/** Pool-adjacent-violators projection onto non-decreasing sequences. */
Vec isotonic(const Vec& x) {
  std::vector<double> level;
  std::vector<int> count;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    level.push_back(x[i]);
    count.push_back(1);
    while (level.size() > 1 && level[level.size() - 2] > level.back()) {
      const double merged = (level[level.size() - 2] * count[count.size() - 2] + level.back() * count.back()) /
                            (count[count.size() - 2] + count.back());
      const int total = count[count.size() - 2] + count.back();
      level.pop_back();
      count.pop_back();
      level.back() = merged;
      count.back() = total;
    }
  }
  Vec out(x.size());
  Eigen::Index k = 0;
  for (std::size_t b = 0; b < level.size(); ++b) {
    for (int c = 0; c < count[b]; ++c) out[k++] = level[b];
  }
  return out;
}

Vec central_gradient(const std::function<double(const Vec&)>& f, const Vec& x) {
  Vec grad(x.size());
  Vec probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + kFiniteDifferenceStep;
    const double up = f(probe);
    probe[i] = x[i] - kFiniteDifferenceStep;
    const double down = f(probe);
    probe[i] = x[i];
    grad[i] = (up - down) / (2.0 * kFiniteDifferenceStep);
  }
  return grad;
}

Mat finite_difference_hessian(const std::function<Vec(const Vec&)>& grad, const Vec& x) {
  const Eigen::Index n = x.size();
  Mat H(n, n);
  const double h = 1e-5;
  Vec probe = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    probe[i] = x[i] + h;
    const Vec up = grad(probe);
    probe[i] = x[i] - h;
    const Vec down = grad(probe);
    probe[i] = x[i];
    H.col(i) = (up - down) / (2.0 * h);
  }
  return 0.5 * (H + H.transpose());
}

Problem make_problem(const ObjectiveSpec& spec) {
  Problem problem;
  const int T = spec.T;
  auto scalar_path = [](const Vec& x) { return PricePath::scalar(x); };
  switch (spec.kind) {
    case ObjectiveKind::Uniform: {
      const double g = spec.g_eff;
      if (g == 0.0) {
        problem.dim = 1;
        problem.value = [](const Vec& x) { return x[0] * (1.0 - x[0]); };
        problem.gradient = [](const Vec& x) { return Vec::Constant(1, 1.0 - 2.0 * x[0]); };
        problem.to_path = [T](const Vec& x) { return PricePath::scalar(Vec::Constant(T, x[0])); };
      } else {
        problem.dim = T;
        problem.value = [g](const Vec& x) { return objectives::uniform(g, x); };
        problem.gradient = [g](const Vec& x) { return objectives::uniform_gradient(g, x); };
        problem.to_path = scalar_path;
      }
      break;
    }
    case ObjectiveKind::Block: {
      const double s = 1.0 / spec.g_eff;
      problem.dim = T;
      problem.value = [s](const Vec& x) { return objectives::block(s, x); };
      problem.gradient = [s](const Vec& x) { return objectives::block_gradient(s, x); };
      problem.to_path = scalar_path;
      break;
    }
    case ObjectiveKind::Nonuniform: {
      const double s = 1.0 / spec.g_eff;
      const DistributionPtr dist = spec.dist;
      problem.dim = T;
      problem.value = [s, dist](const Vec& x) { return objectives::nonuniform(s, *dist, x); };
      problem.to_path = scalar_path;
      problem.tolerance = 1e-8;
      break;
    }
    case ObjectiveKind::Discrimination: {
      const Mat e_inv = spec.e_inv;
      const Vec alpha = spec.net->alpha();
      const int m = spec.net->m();
      problem.dim = T * m;
      auto reshape = [T, m](const Vec& x) { return Mat(Eigen::Map<const Mat>(x.data(), T, m)); };
      problem.value = [e_inv, alpha, reshape](const Vec& x) {
        return objectives::discrimination(e_inv, alpha, reshape(x));
      };
      problem.to_path = [reshape](const Vec& x) { return PricePath::per_group(reshape(x)); };
      problem.tolerance = 1e-8;
      break;
    }
    case ObjectiveKind::AllSalesTwoBuyer: {
      const double g = spec.g_eff;
      problem.dim = 2;
      problem.value = [g](const Vec& x) { return objectives::two_buyer_nondecreasing(g, x[0], x[1]); };
      problem.project = [](const Vec& x) { return clip01(isotonic(x)); };
      problem.to_path = scalar_path;
      problem.tolerance = 1e-8;
      break;
    }
  }
  if (!problem.gradient) {
    auto value = problem.value;
    problem.gradient = [value](const Vec& x) { return central_gradient(value, x); };
  }
  if (!problem.project) problem.project = clip01;
  return problem;
}

struct LocalResult {
  Vec x;
  double value = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
};

double projected_gradient_norm(const Problem& problem, const Vec& x) {
  return (problem.project(x + problem.gradient(x)) - x).norm();
}

void newton_polish(const Problem& problem, LocalResult& result) {
  for (int round = 0; round < 30; ++round) {
    const Vec grad = problem.gradient(result.x);
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < result.x.size(); ++i) {
      const bool at_lower = result.x[i] <= 1e-14 && grad[i] < 0.0;
      const bool at_upper = result.x[i] >= 1.0 - 1e-14 && grad[i] > 0.0;
      if (!at_lower && !at_upper) free.push_back(i);
    }
    if (free.empty()) return;
    const Mat H = finite_difference_hessian(problem.gradient, result.x);
    const auto k = static_cast<Eigen::Index>(free.size());
    Mat Hf(k, k);
    Vec gf(k);
    for (Eigen::Index a = 0; a < k; ++a) {
      gf[a] = grad[free[a]];
      for (Eigen::Index b = 0; b < k; ++b) Hf(a, b) = H(free[a], free[b]);
    }
    Eigen::LDLT<Mat> ldlt(-Hf);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return;
    const Vec step = ldlt.solve(gf);
    if (!step.allFinite()) return;
    Vec candidate = result.x;
    for (Eigen::Index a = 0; a < k; ++a) candidate[free[a]] += step[a];
    candidate = problem.project(candidate);
    const double value = problem.value(candidate);
    if (!(value >= result.value - 1e-15)) return;
    const bool tiny = (candidate - result.x).norm() < 1e-15;
    result.x = candidate;
    result.value = value;
    if (tiny) return;
  }
}

LocalResult ascend(const Problem& problem, Vec x, int max_iterations) {
  LocalResult result;
  x = problem.project(x);
  double fx = problem.value(x);
  double step = 1.0;
  int it = 0;
  for (; it < max_iterations; ++it) {
    const Vec grad = problem.gradient(x);
    const double pg_norm = (problem.project(x + grad) - x).norm();
    if (pg_norm <= problem.tolerance) {
      result.converged = true;
      break;
    }
    bool accepted = false;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      const Vec candidate = problem.project(x + step * grad);
      const double fc = problem.value(candidate);
      if (fc >= fx + 1e-4 * grad.dot(candidate - x) && fc >= fx) {
        const bool stalled = (candidate - x).norm() < 1e-16;
        x = candidate;
        fx = fc;
        accepted = !stalled;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      result.converged = pg_norm <= 1e3 * problem.tolerance;
      break;
    }
    step = std::min(step * 2.0, 1e3);
  }
  result.x = x;
  result.value = fx;
  result.iterations = it;
  newton_polish(problem, result);
  result.gradient_norm = projected_gradient_norm(problem, result.x);
  if (result.gradient_norm <= problem.tolerance) result.converged = true;
  return result;
}

bool lexicographically_less(const Vec& a, const Vec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

}  // namespace

OptResult maximize(const ObjectiveSpec& spec, const OptOptions& options) {
  if (options.starts < 1) throw Error(ErrorKind::InvalidParameter, "at least one start is required");
  const Problem problem = make_problem(spec);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Vec> starts;
  starts.push_back(Vec::Constant(problem.dim, 0.5));
  if (options.initial) {
    const Mat& prices = options.initial->prices();
    if (prices.size() == problem.dim) {
      starts.push_back(problem.project(Eigen::Map<const Vec>(prices.data(), problem.dim)));
    } else if (problem.dim == 1) {
      starts.push_back(Vec::Constant(1, prices.mean()));
    } else {
      throw Error(ErrorKind::ShapeMismatch, "initial path does not match the objective");
    }
  }
  for (int s = 1; s < options.starts; ++s) {
    Vec x(problem.dim);
    for (int i = 0; i < problem.dim; ++i) x[i] = unit(rng);
    starts.push_back(x);
  }

  std::optional<LocalResult> best;
  for (const Vec& start : starts) {
    LocalResult local = ascend(problem, start, options.max_iterations);
    if (!best) {
      best = local;
      continue;
    }
    const double scale = std::max(1.0, std::abs(best->value));
    if (local.value > best->value + 1e-12 * scale) {
      best = local;
    } else if (std::abs(local.value - best->value) <= 1e-12 * scale &&
               lexicographically_less(local.x, best->x)) {
      best = local;
    }
  }

  OptResult result;
  result.argmax = problem.to_path(best->x);
  result.value = evaluate_objective(spec, result.argmax);
  result.iterations = best->iterations;
  result.gradient_norm = best->gradient_norm;
  result.converged = best->converged;
  return result;
}

OptResult grid_search(const ObjectiveSpec& spec, int points_per_axis) {
  if (points_per_axis < 2) throw Error(ErrorKind::InvalidParameter, "grid needs at least two points per axis");
  const int dim = spec.T * spec.columns();
  const double total = std::pow(static_cast<double>(points_per_axis), dim);
  if (total > 5e7) throw Error(ErrorKind::TooLarge, fmt::format("grid of {:.3g} points is too large", total));
  std::vector<int> index(dim, 0);
  Mat P(spec.T, spec.columns());
  OptResult result;
  result.value = -std::numeric_limits<double>::infinity();
  const double h = 1.0 / (points_per_axis - 1);
  while (true) {
    for (int k = 0; k < dim; ++k) P(k % spec.T, k / spec.T) = index[k] * h;
    const PricePath path(P);
    const double value = evaluate_objective(spec, path);
    if (value > result.value) {
      result.value = value;
      result.argmax = path;
    }
    int k = 0;
    while (k < dim && ++index[k] == points_per_axis) index[k++] = 0;
    if (k == dim) break;
    ++result.iterations;
  }
  result.converged = true;
  return result;
}

Mat uniform_hessian_matrix(double g, int T) {
  require_rounds(T);
  Mat M = Mat::Zero(T, T);
  if (T == 1) {
    M(0, 0) = -2.0;
    return M;
  }
  for (int i = 0; i < T; ++i) {
    M(i, i) = -2.0;
    if (i + 1 < T) {
      M(i, i + 1) = 1.0;
      M(i + 1, i) = 1.0;
    }
  }
  M(0, T - 1) += 1.0 - g;
  M(T - 1, 0) += 1.0 - g;
  return M;
}

namespace {

Mat nonuniform_hessian(const ObjectiveSpec& spec, const PricePath& path) {
  const int T = spec.T;
  const double s = 1.0 / spec.g_eff;
  const ValuationDistribution& dist = *spec.dist;
  const Vec p = path.prices().col(0).reverse();
  const double p1 = p[0];
  const double pT = p[T - 1];
  Mat H = Mat::Zero(T, T);
  for (int t = 1; t < T; ++t) {
    H(t, t - 1) += s;
    H(t - 1, t) += s;
    H(t, t) -= 2.0 * s;
  }
  H(0, 0) -= 2.0 * s;
  if (T == 1) {
    H(0, 0) += 2.0 * s - 2.0 * dist.pdf(p1) - p1 * dist.pdf_derivative(p1);
    return H;
  }
  H(0, T - 1) += s - dist.pdf(pT);
  H(T - 1, 0) += s - dist.pdf(pT);
  H(T - 1, T - 1) -= p1 * dist.pdf_derivative(pT);
  return H;
}

Mat discrimination_hessian(const ObjectiveSpec& spec) {
  const int T = spec.T;
  const int m = spec.net->m();
  const Mat& Ei = spec.e_inv;
  const Mat A = spec.net->A();
  const Mat sym = Ei + Ei.transpose();
  Mat H = Mat::Zero(T * m, T * m);
  auto block = [&](int a, int b) { return H.block(a * m, b * m, m, m); };
  for (int t = 1; t < T; ++t) {
    block(t, t - 1) += Ei;
    block(t - 1, t) += Ei.transpose();
    block(t, t) -= sym;
  }
  block(0, 0) -= sym;
  if (T == 1) {
    block(0, 0) += sym - 2.0 * A;
    return H;
  }
  block(0, T - 1) += Ei - A;
  block(T - 1, 0) += Ei.transpose() - A;
  return H;
}

}  // namespace

HessianReport hessian_check(const ObjectiveSpec& spec) {
  HessianReport report;
  switch (spec.kind) {
    case ObjectiveKind::Uniform:
    case ObjectiveKind::Block:
      report.hessian = uniform_hessian_matrix(spec.g_eff, spec.T);
      break;
    case ObjectiveKind::Nonuniform: {
      try {
        const PolicyReport policy = nonuniform_policy(*spec.net, *spec.dist, spec.T);
        report.hessian = nonuniform_hessian(spec, policy.path);
      } catch (const Error&) {
        report.max_eigenvalue = std::numeric_limits<double>::quiet_NaN();
        report.passed = false;
        return report;
      }
      break;
    }
    case ObjectiveKind::Discrimination:
      report.hessian = discrimination_hessian(spec);
      break;
    case ObjectiveKind::AllSalesTwoBuyer: {
      const Problem problem = make_problem(spec);
      report.hessian = finite_difference_hessian(problem.gradient, Vec::Constant(2, 0.5));
      break;
    }
  }
  report.max_eigenvalue = max_sym_eigenvalue(report.hessian);
  report.passed = report.max_eigenvalue <= 1e-10;
  return report;
}

KktReport kkt_check_all_sales(const BlockNetwork& net, int T) {
  require_rounds(T);
  const Vec s = all_sales_mass_sequence(net, T);
  for (int t = 1; t < T; ++t) {
    if (s[t] > s[t - 1] + 1e-10) {
      throw Error(ErrorKind::ConditionViolated,
                  fmt::format("precondition: alpha'(EA)^t 1 increases at t = {}", t));
    }
  }
  KktReport report;
  report.multipliers = Vec::Zero(std::max(T - 1, 0));
  for (int j = 1; j < T; ++j) {
    double sum = 0.0;
    for (int k = 1; k <= T - j; ++k) sum += s[k - 1] - s[T - k];
    report.multipliers[j - 1] = 0.5 * sum;
  }
  report.multipliers_nonnegative = T == 1 || report.multipliers.minCoeff() >= -1e-12;

  auto negative_revenue = [&net](const Vec& chronological) { return -objectives::all_sales(net, chronological); };
  const Vec grad_f = central_gradient(negative_revenue, Vec::Constant(T, 0.5)).reverse();
  Vec lagrangian = grad_f;
  for (int j = 1; j < T; ++j) {
    lagrangian[j] += report.multipliers[j - 1];
    lagrangian[j - 1] -= report.multipliers[j - 1];
  }
  report.stationarity_residual = lagrangian.cwiseAbs().maxCoeff();
  report.curvature = 2.0 * s.sum();

  if (!report.multipliers_nonnegative) {
    throw Error(ErrorKind::ConditionViolated,
                fmt::format("dual feasibility: a multiplier is negative ({:.12g})", report.multipliers.minCoeff()));
  }
  if (report.stationarity_residual > 1e-8) {
    throw Error(ErrorKind::ConditionViolated,
                fmt::format("stationarity: Lagrangian gradient {:.3g} exceeds 1e-8", report.stationarity_residual));
  }
  if (!(report.curvature > 0.0)) {
    throw Error(ErrorKind::ConditionViolated, "second-order: curvature along the feasible direction is not positive");
  }
  report.passed = true;
  return report;
}

std::pair<double, int> two_buyer_nonincreasing_closed_form(double g) {
  const double case2_lower = (std::sqrt(13.0) - 1.0) / 6.0;
  const double case3_lower = std::sqrt(2.0) - 1.0;
  if (g >= 0.5) return {25.0 / 32.0, 1};
  if (g >= case2_lower) {
    const double base = 1.0 + g - g * g;
    return {base * base / 2.0, 2};
  }
  if (g >= case3_lower) return {2.0 * g * (1.0 + g - 2.0 * g * g - 2.0 * g * g * g), 3};
  const double g2 = g * g;
  return {0.5 * (1.0 + g + 2.0 * g2 - 2.0 * g2 * g - 3.0 * g2 * g2 + g2 * g2 * g), 4};
}

TwoBuyerReport two_buyer_all_sales_oracle(double g, int grid_points) {
  if (!(g >= 0.0 && g <= 1.0)) throw Error(ErrorKind::InvalidParameter, "g must lie in [0,1]");
  if (grid_points < 1000) throw Error(ErrorKind::InvalidParameter, "grid needs at least 1000 points per axis");
  TwoBuyerReport report;
  report.nondecreasing_revenue = -std::numeric_limits<double>::infinity();
  report.nonincreasing_revenue = -std::numeric_limits<double>::infinity();
  double nd_first = 0.0, nd_second = 0.0, ni_first = 0.0, ni_second = 0.0;
  const double h = 1.0 / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) {
    const double first = i * h;
    for (int j = 0; j < grid_points; ++j) {
      const double second = j * h;
      if (first <= second) {
        const double value = objectives::two_buyer_nondecreasing(g, first, second);
        if (value > report.nondecreasing_revenue) {
          report.nondecreasing_revenue = value;
          nd_first = first;
          nd_second = second;
        }
      }
      if (first >= second) {
        const double value = objectives::two_buyer_nonincreasing(g, first, second);
        if (value > report.nonincreasing_revenue) {
          report.nonincreasing_revenue = value;
          ni_first = first;
          ni_second = second;
        }
      }
    }
  }
  Vec nd(2), ni(2);
  nd << nd_first, nd_second;
  ni << ni_first, ni_second;
  report.nondecreasing_path = PricePath::scalar(nd);
  report.nonincreasing_path = PricePath::scalar(ni);
  report.nondecreasing_closed_form = (1.0 + g) / 2.0;
  const auto [closed, case_number] = two_buyer_nonincreasing_closed_form(g);
  report.nonincreasing_closed_form = closed;
  report.nonincreasing_case = case_number;
  if (report.nondecreasing_revenue >= report.nonincreasing_revenue) {
    report.best_revenue = report.nondecreasing_revenue;
    report.best_path = report.nondecreasing_path;
    report.regime = "non-decreasing";
  } else {
    report.best_revenue = report.nonincreasing_revenue;
    report.best_path = report.nonincreasing_path;
    report.regime = fmt::format("non-increasing case {}", case_number);
  }
  return report;
}

double example1_enumerate(const PairwiseNetwork& G, const PricePath& prices, const Vec& first_round_cutoffs) {
  const int n = G.n();
  if (n > 12) throw Error(ErrorKind::TooLarge, fmt::format("n = {} exceeds the enumeration limit of 12", n));
  if (prices.T() != 2 || prices.columns() != 1) {
    throw Error(ErrorKind::ShapeMismatch, "enumeration needs a two-round scalar price path");
  }
  if (first_round_cutoffs.size() != n) {
    throw Error(ErrorKind::ShapeMismatch, "one first-round cutoff per buyer is required");
  }
  const double first_price = prices.at_round(1);
  const double second_price = prices.at_round(2);
  const Vec c = first_round_cutoffs.cwiseMax(0.0).cwiseMin(1.0);
  double expected = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    double probability = 1.0;
    int bought = 0;
    for (int i = 0; i < n; ++i) {
      const bool in_first = (mask >> i) & 1u;
      probability *= in_first ? (1.0 - c[i]) : c[i];
      bought += in_first ? 1 : 0;
    }
    if (probability == 0.0) continue;
    double second_round = 0.0;
    for (int i = 0; i < n; ++i) {
      if ((mask >> i) & 1u) continue;
      double externality = 0.0;
      for (int j = 0; j < n; ++j) {
        if ((mask >> j) & 1u) externality += G.G(i, j);
      }
      const double cutoff = std::clamp(second_price - externality, 0.0, 1.0);
      second_round += std::clamp((c[i] - cutoff) / c[i], 0.0, 1.0);
    }
    expected += probability * (first_price * bought + second_price * second_round);
  }
  return expected;
}

}  // namespace netprice
