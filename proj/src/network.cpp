#include "netprice/network.hpp"

#include <cmath>
#include <fmt/format.h>

#include "netprice/error.hpp"

namespace netprice {

BlockNetwork::BlockNetwork(Vec alpha, Mat E) : alpha_(std::move(alpha)), E_(std::move(E)) {
  const auto m = alpha_.size();
  if (m < 1) throw Error(ErrorKind::InvalidParameter, "network needs at least one group");
  if (E_.rows() != m || E_.cols() != m) {
    throw Error(ErrorKind::ShapeMismatch,
                fmt::format("E is {}x{} but alpha has {} entries", E_.rows(), E_.cols(), m));
  }
  if (!alpha_.allFinite() || !E_.allFinite()) {
    throw Error(ErrorKind::InvalidParameter, "alpha and E must be finite");
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(alpha_[i] > 0.0) || alpha_[i] > 1.0) {
      throw Error(ErrorKind::InvalidParameter, fmt::format("alpha[{}] = {} is not in (0,1]", i, alpha_[i]));
    }
  }
  if (std::abs(alpha_.sum() - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidParameter, fmt::format("alpha sums to {:.15g}, not 1", alpha_.sum()));
  }
  if ((E_.array() < 0.0).any()) throw Error(ErrorKind::InvalidParameter, "E has negative entries");
}

BlockNetwork BlockNetwork::uniform(double g) {
  return BlockNetwork(Vec::Ones(1), Mat::Constant(1, 1, g));
}

UniformNetwork::UniformNetwork(double g_value) : g(g_value) {
  if (!(g >= 0.0 && g <= 1.0)) {
    throw Error(ErrorKind::InvalidParameter, fmt::format("g = {} is not in [0,1]", g));
  }
}

PairwiseNetwork::PairwiseNetwork(Mat weights) : G(std::move(weights)) {
  if (G.rows() != G.cols() || G.rows() < 1) {
    throw Error(ErrorKind::ShapeMismatch, "pairwise weights must be a non-empty square matrix");
  }
  if (!G.allFinite() || (G.array() < 0.0).any()) {
    throw Error(ErrorKind::InvalidParameter, "pairwise weights must be finite and non-negative");
  }
  if (G.diagonal().cwiseAbs().maxCoeff() != 0.0) {
    throw Error(ErrorKind::InvalidParameter, "pairwise weights must have a zero diagonal");
  }
}

bool ValidationReport::passed() const {
  for (const auto& c : conditions) {
    if (!c.passed) return false;
  }
  return true;
}

const Condition* ValidationReport::first_failure() const {
  for (const auto& c : conditions) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

std::string ValidationReport::summary() const {
  const Condition* failure = first_failure();
  if (failure == nullptr) return check + ": all conditions hold";
  std::string out = check + ": condition '" + failure->name + "' failed";
  if (!failure->detail.empty()) out += " (" + failure->detail + ")";
  return out;
}

double asymmetry(const Mat& C) {
  Mat off = C;
  off.diagonal().setZero();
  const Vec out_degree = off.rowwise().sum();
  const Vec in_degree = off.colwise().sum().transpose();
  return out_degree.dot(in_degree);
}

NetworkMeasures compute_measures(const BlockNetwork& net) {
  NetworkMeasures measures;
  measures.e_inv_ones = solve(net.E(), ones(net.m()));
  measures.s_sum = measures.e_inv_ones.sum();
  measures.network_effect = 1.0 / measures.s_sum;
  measures.asymmetry = asymmetry(net.E());
  return measures;
}

ValidationReport check_assumption2(const BlockNetwork& net) {
  ValidationReport report{"assumption2", {}};
  Condition invertible{"invertible", true, "", std::nullopt, std::nullopt};
  Condition s_sum{"s_sum_at_least_one", true, "", std::nullopt, std::nullopt};
  Condition nonneg{"e_inv_ones_nonnegative", true, "", std::nullopt, std::nullopt};
  try {
    const NetworkMeasures measures = compute_measures(net);
    s_sum.value = measures.s_sum;
    if (measures.s_sum < 1.0 - 1e-10) {
      s_sum.passed = false;
      s_sum.detail = fmt::format("1'E^-1 1 = {:.12g} < 1", measures.s_sum);
    }
    Eigen::Index worst = 0;
    const double min_entry = measures.e_inv_ones.minCoeff(&worst);
    nonneg.value = min_entry;
    if (min_entry < -1e-10) {
      nonneg.passed = false;
      nonneg.at = static_cast<double>(worst);
      nonneg.detail = fmt::format("[E^-1 1]_{} = {:.12g} < 0", worst, min_entry);
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularMatrix) throw;
    invertible.passed = false;
    invertible.detail = "E is numerically singular";
    s_sum.passed = false;
    s_sum.detail = "not evaluated: E is singular";
    nonneg.passed = false;
    nonneg.detail = "not evaluated: E is singular";
  }
  report.conditions = {invertible, s_sum, nonneg};
  return report;
}

ValidationReport check_assumption3(const BlockNetwork& net, const ValuationDistribution& dist,
                                   int grid_points) {
  if (grid_points < 2) throw Error(ErrorKind::InvalidParameter, "grid_points must be at least 2");
  std::vector<double> xs(static_cast<std::size_t>(grid_points));
  std::vector<double> f(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = (static_cast<double>(i) + 0.5) / grid_points;
    f[i] = dist.pdf(xs[i]);
    if (!(f[i] > 0.0) || !std::isfinite(f[i])) {
      throw Error(ErrorKind::InvalidDistribution,
                  fmt::format("density f({:.12g}) = {:.12g} is not positive", xs[i], f[i]));
    }
  }

  ValidationReport base = check_assumption2(net);
  ValidationReport report{"assumption3", {}};
  report.conditions.push_back(base.conditions[0]);
  report.conditions.push_back(base.conditions[2]);

  Condition dominance{"s_sum_dominates_density", true, "", std::nullopt, std::nullopt};
  if (base.conditions[0].passed) {
    const double s = *base.conditions[1].value;
    dominance.value = s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (s < f[i] - 1e-12) {
        dominance.passed = false;
        dominance.at = xs[i];
        dominance.detail = fmt::format("1'E^-1 1 = {:.12g} < f({:.12g}) = {:.12g}", s, xs[i], f[i]);
        break;
      }
    }
  } else {
    dominance.passed = false;
    dominance.detail = "not evaluated: E is singular";
  }
  report.conditions.push_back(dominance);

  Condition hazard{"log_density_slope_nonincreasing", true, "", std::nullopt, std::nullopt};
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double prev = dist.pdf_derivative(xs[i - 1]) / f[i - 1];
    const double cur = dist.pdf_derivative(xs[i]) / f[i];
    if (cur > prev + 1e-8) {
      hazard.passed = false;
      hazard.at = xs[i];
      hazard.value = cur - prev;
      hazard.detail = fmt::format("f'/f rises from {:.12g} to {:.12g} at x = {:.12g}", prev, cur, xs[i]);
      break;
    }
  }
  report.conditions.push_back(hazard);

  Condition xf{"x_density_nondecreasing", true, "", std::nullopt, std::nullopt};
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double prev = xs[i - 1] * f[i - 1];
    const double cur = xs[i] * f[i];
    if (cur < prev - 1e-8) {
      xf.passed = false;
      xf.at = xs[i];
      xf.value = cur - prev;
      xf.detail = fmt::format("x f(x) falls from {:.12g} to {:.12g} at x = {:.12g}", prev, cur, xs[i]);
      break;
    }
  }
  report.conditions.push_back(xf);
  return report;
}

Vec bonacich(const Mat& E, double beta) {
  const Mat M = Mat::Identity(E.rows(), E.cols()) - beta * E;
  return solve(M, ones(E.rows()));
}

Vec bonacich(const BlockNetwork& net, double beta) { return bonacich(net.E(), beta); }

double taylor_revenue(const Mat& C, int T, double delta) {
  if (T < 1) throw Error(ErrorKind::InvalidParameter, "T must be at least 1");
  if (C.rows() != C.cols() || C.rows() < 1) {
    throw Error(ErrorKind::ShapeMismatch, "C must be a non-empty square matrix");
  }
  const double m = static_cast<double>(C.rows());
  const double t = static_cast<double>(T);
  const double k = 2.0 * m * t - t + 1.0;
  const double sum_c = C.sum();
  const double sum_c2 = (C * C).sum();
  const double zeroth = t * m / (4.0 * t * m - 2.0 * (t - 1.0));
  const double first = delta * t * (t - 1.0) * sum_c / (2.0 * k * k);
  const double second =
      delta * delta * t * (t - 1.0) * (2.0 * t * sum_c * sum_c - k * sum_c2) / (2.0 * k * k * k);
  return zeroth + first + second;
}

double taylor_revenue_discrimination(const Mat& C, const Vec& alpha, double delta) {
  if (C.rows() != C.cols() || C.rows() != alpha.size()) {
    throw Error(ErrorKind::ShapeMismatch, "C and alpha dimensions differ");
  }
  if (std::abs(alpha.sum() - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidParameter, "alpha must sum to 1");
  }
  const Vec w = alpha.array() / (4.0 - alpha.array());
  return w.sum() + delta * w.dot(C * w);
}

Mat family_matrix(const std::string& family, int m, double weight_sum, EdgeOrientation orientation) {
  if (m < 2) throw Error(ErrorKind::InvalidParameter, "network families need at least two nodes");
  Mat C = Mat::Zero(m, m);
  auto add_edge = [&](int from, int to) {
    C(from, to) = 1.0;
    if (orientation == EdgeOrientation::Bidirectional) C(to, from) = 1.0;
  };
  if (family == "star") {
    for (int leaf = 1; leaf < m; ++leaf) add_edge(0, leaf);
  } else if (family == "chain") {
    for (int i = 0; i + 1 < m; ++i) add_edge(i, i + 1);
  } else if (family == "ring") {
    if (m < 3 && orientation == EdgeOrientation::Bidirectional) {
      throw Error(ErrorKind::InvalidParameter, "a bidirectional ring needs at least three nodes");
    }
    for (int i = 0; i < m; ++i) add_edge(i, (i + 1) % m);
  } else {
    throw Error(ErrorKind::InvalidParameter, "unknown network family '" + family + "'");
  }
  return C * (weight_sum / C.sum());
}

}  // namespace netprice
