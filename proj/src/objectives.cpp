#include "netprice/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netprice/error.hpp"

namespace netprice::objectives {

namespace {

/** Converts a chronological vector to the rounds-remaining order used by the formulas. */
Vec by_remaining(const Vec& chronological) { return chronological.reverse(); }

void require_rounds(const Vec& p) {
  if (p.size() < 1) throw Error(ErrorKind::ShapeMismatch, "price path must have at least one round");
}

/** Value and gradient of Σ_{t≥2}(p_t p_{t−1} − p_t²)·a + b p_1 + c p_1 p_T − d p_1², remaining order. */
double quadratic_form(const Vec& p, double a, double b, double c, double d, Vec* grad) {
  const Eigen::Index T = p.size();
  double value = 0.0;
  if (grad != nullptr) grad->setZero(T);
  for (Eigen::Index t = 1; t < T; ++t) {
    value += a * (p[t] * p[t - 1] - p[t] * p[t]);
    if (grad != nullptr) {
      (*grad)[t] += a * (p[t - 1] - 2.0 * p[t]);
      (*grad)[t - 1] += a * p[t];
    }
  }
  value += b * p[0] + c * p[0] * p[T - 1] - d * p[0] * p[0];
  if (grad != nullptr) {
    (*grad)[0] += b + c * p[T - 1] - 2.0 * d * p[0];
    (*grad)[T - 1] += c * p[0];
  }
  return value;
}

}  // namespace

double uniform(double g, const Vec& chronological) {
  require_rounds(chronological);
  if (g == 0.0) {
    const double first = chronological[0];
    if ((chronological.array() != first).any()) return -std::numeric_limits<double>::infinity();
    return first * (1.0 - first);
  }
  const Vec p = by_remaining(chronological);
  return quadratic_form(p, 1.0, g, 1.0 - g, 1.0, nullptr) / g;
}

Vec uniform_gradient(double g, const Vec& chronological) {
  require_rounds(chronological);
  if (!(g > 0.0)) throw Error(ErrorKind::InvalidParameter, "uniform gradient requires g > 0");
  Vec grad;
  quadratic_form(by_remaining(chronological), 1.0, g, 1.0 - g, 1.0, &grad);
  return (grad / g).reverse();
}

double block(double s_sum, const Vec& chronological) {
  require_rounds(chronological);
  return quadratic_form(by_remaining(chronological), s_sum, 1.0, s_sum - 1.0, s_sum, nullptr);
}

Vec block_gradient(double s_sum, const Vec& chronological) {
  require_rounds(chronological);
  Vec grad;
  quadratic_form(by_remaining(chronological), s_sum, 1.0, s_sum - 1.0, s_sum, &grad);
  return grad.reverse();
}

double nonuniform(double s_sum, const ValuationDistribution& dist, const Vec& chronological) {
  require_rounds(chronological);
  const Vec p = by_remaining(chronological);
  const Eigen::Index T = p.size();
  double value = 0.0;
  for (Eigen::Index t = 1; t < T; ++t) value += s_sum * p[t] * (p[t - 1] - p[t]);
  value += p[0] * (1.0 - s_sum * (p[0] - p[T - 1]) - dist.cdf(p[T - 1]));
  return value;
}

double discrimination(const Mat& e_inv, const Vec& alpha, const Mat& chronological) {
  const Eigen::Index T = chronological.rows();
  const Eigen::Index m = alpha.size();
  if (T < 1 || e_inv.rows() != m || e_inv.cols() != m) {
    throw Error(ErrorKind::ShapeMismatch, "discrimination objective dimensions differ");
  }
  Mat P(T, m);
  if (chronological.cols() == m) {
    P = chronological.colwise().reverse();
  } else if (chronological.cols() == 1) {
    P = chronological.colwise().reverse().replicate(1, m);
  } else {
    throw Error(ErrorKind::ShapeMismatch, "discrimination path must have 1 or m columns");
  }
  double value = 0.0;
  for (Eigen::Index t = 1; t < T; ++t) {
    const Vec pt = P.row(t).transpose();
    const Vec prev = P.row(t - 1).transpose();
    value += pt.dot(e_inv * (prev - pt));
  }
  const Vec p1 = P.row(0).transpose();
  const Vec pT = P.row(T - 1).transpose();
  value += p1.dot(alpha.cwiseProduct(Vec::Ones(m) - pT));
  value -= p1.dot(e_inv * (p1 - pT));
  return value;
}

double all_sales(const BlockNetwork& net, const Vec& chronological) {
  require_rounds(chronological);
  const Vec p = by_remaining(chronological);
  const Eigen::Index T = p.size();
  const Mat EA = net.EA();
  const Vec one = Vec::Ones(net.m());
  Vec v_next = one;
  double revenue = 0.0;
  for (Eigen::Index t = T - 1; t >= 0; --t) {
    const Vec v_t = p[t] * one - EA * (one - v_next);
    revenue += p[t] * net.alpha().dot(v_next - v_t);
    v_next = v_t;
  }
  return revenue;
}

double two_buyer_nondecreasing(double g, double first, double second) {
  const double second_round_mass = std::clamp(first - second + g * (1.0 - first), 0.0, std::max(first, 0.0));
  return 2.0 * (first * (1.0 - first) + second * second_round_mass);
}

double two_buyer_nonincreasing(double g, double first, double second) {
  if (!(first > 0.0) || first < second || first - second > g * g) {
    return -std::numeric_limits<double>::infinity();
  }
  const double p2 = first;
  const double p1 = second;
  const double share = std::min(1.0, 1.0 - (p1 - g) / p2);
  return 2.0 * (1.0 - p2) * (1.0 - p2) * p2 + 2.0 * p2 * (1.0 - p2) * (share * p1 + p2) +
         p2 * p2 * (2.0 * p1 * (1.0 - p1 / p2));
}

}  // namespace netprice::objectives
