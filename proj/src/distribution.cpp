#include "netprice/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "netprice/error.hpp"

namespace netprice {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

double ValuationDistribution::inverse_cdf(double u) const {
  u = clamp01(u);
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double ValuationDistribution::partial_expectation(double a, double b) const {
  a = clamp01(a);
  b = clamp01(b);
  if (b <= a) return 0.0;
  constexpr int kIntervals = 2000;
  const double h = (b - a) / kIntervals;
  auto g = [this](double x) { return x * pdf(x); };
  double sum = g(a) + g(b);
  for (int i = 1; i < kIntervals; ++i) sum += g(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

double UniformDistribution::cdf(double x) const { return clamp01(x); }
double UniformDistribution::pdf(double) const { return 1.0; }
double UniformDistribution::pdf_derivative(double) const { return 0.0; }
double UniformDistribution::inverse_cdf(double u) const { return clamp01(u); }
double UniformDistribution::partial_expectation(double a, double b) const {
  a = clamp01(a);
  b = clamp01(b);
  return b > a ? 0.5 * (b * b - a * a) : 0.0;
}

PowerDistribution::PowerDistribution(double k) : k_(k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw Error(ErrorKind::InvalidDistribution, "power exponent must be positive and finite");
  }
}

double PowerDistribution::cdf(double x) const { return std::pow(clamp01(x), k_); }
double PowerDistribution::pdf(double x) const { return k_ * std::pow(clamp01(x), k_ - 1.0); }
double PowerDistribution::pdf_derivative(double x) const {
  if (k_ == 1.0) return 0.0;
  return k_ * (k_ - 1.0) * std::pow(clamp01(x), k_ - 2.0);
}
double PowerDistribution::inverse_cdf(double u) const { return std::pow(clamp01(u), 1.0 / k_); }
double PowerDistribution::partial_expectation(double a, double b) const {
  a = clamp01(a);
  b = clamp01(b);
  if (b <= a) return 0.0;
  return k_ / (k_ + 1.0) * (std::pow(b, k_ + 1.0) - std::pow(a, k_ + 1.0));
}
std::string PowerDistribution::name() const {
  std::ostringstream out;
  out << "power:" << k_;
  return out.str();
}

FunctionDistribution::FunctionDistribution(std::string name, std::function<double(double)> cdf,
                                           std::function<double(double)> pdf,
                                           std::function<double(double)> pdf_derivative)
    : name_(std::move(name)),
      cdf_(std::move(cdf)),
      pdf_(std::move(pdf)),
      dpdf_(std::move(pdf_derivative)) {}

TableDistribution::TableDistribution(std::vector<double> x, std::vector<double> F)
    : x_(std::move(x)), F_(std::move(F)) {
  const std::size_t n = x_.size();
  if (n < 2 || F_.size() != n) {
    throw Error(ErrorKind::InvalidDistribution, "table needs at least two matching (x, F) rows");
  }
  if (std::abs(x_.front()) > 1e-12 || std::abs(x_.back() - 1.0) > 1e-12 ||
      std::abs(F_.front()) > 1e-12 || std::abs(F_.back() - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidDistribution, "table must run from (0, 0) to (1, 1)");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw Error(ErrorKind::InvalidDistribution, "table x must increase");
    if (F_[i] < F_[i - 1]) throw Error(ErrorKind::InvalidDistribution, "table F must not decrease");
  }
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (F_[i + 1] - F_[i]) / (x_[i + 1] - x_[i]);
  slope_.assign(n, 0.0);
  slope_[0] = delta[0];
  slope_[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    slope_[i] = (delta[i - 1] * delta[i] <= 0.0) ? 0.0 : 0.5 * (delta[i - 1] + delta[i]);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (delta[i] == 0.0) {
      slope_[i] = 0.0;
      slope_[i + 1] = 0.0;
      continue;
    }
    const double a = slope_[i] / delta[i];
    const double b = slope_[i + 1] / delta[i];
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double tau = 3.0 / std::sqrt(r);
      slope_[i] = tau * a * delta[i];
      slope_[i + 1] = tau * b * delta[i];
    }
  }
}

std::size_t TableDistribution::segment(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t idx = static_cast<std::size_t>(std::distance(x_.begin(), it));
  if (idx == 0) return 0;
  return std::min(idx - 1, x_.size() - 2);
}

double TableDistribution::cdf(double x) const {
  x = clamp01(x);
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double s = (x - x_[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * F_[i] + h10 * h * slope_[i] + h01 * F_[i + 1] + h11 * h * slope_[i + 1];
}

double TableDistribution::pdf(double x) const {
  x = clamp01(x);
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double s = (x - x_[i]) / h;
  const double d00 = 6 * s * s - 6 * s;
  const double d10 = 3 * s * s - 4 * s + 1;
  const double d01 = -6 * s * s + 6 * s;
  const double d11 = 3 * s * s - 2 * s;
  return (d00 * F_[i] + d01 * F_[i + 1]) / h + d10 * slope_[i] + d11 * slope_[i + 1];
}

double TableDistribution::pdf_derivative(double x) const {
  x = clamp01(x);
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double s = (x - x_[i]) / h;
  const double e00 = 12 * s - 6;
  const double e10 = 6 * s - 4;
  const double e01 = -12 * s + 6;
  const double e11 = 6 * s - 2;
  return (e00 * F_[i] + e01 * F_[i + 1]) / (h * h) + (e10 * slope_[i] + e11 * slope_[i + 1]) / h;
}

DistributionPtr uniform_distribution() {
  static const DistributionPtr instance = std::make_shared<UniformDistribution>();
  return instance;
}

namespace {

DistributionPtr read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidDistribution, "cannot open table file " + path);
  std::vector<double> xs, Fs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x = 0.0;
    double F = 0.0;
    if (!(row >> x >> F)) continue;
    xs.push_back(x);
    Fs.push_back(F);
  }
  return std::make_shared<TableDistribution>(std::move(xs), std::move(Fs));
}

}  // namespace

DistributionPtr make_distribution(const std::string& spec) {
  if (spec == "uniform") return uniform_distribution();
  if (spec.rfind("power:", 0) == 0) {
    const std::string arg = spec.substr(6);
    std::size_t used = 0;
    double k = 0.0;
    try {
      k = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != arg.size()) {
      throw Error(ErrorKind::InvalidDistribution, "malformed power exponent in '" + spec + "'");
    }
    return std::make_shared<PowerDistribution>(k);
  }
  if (spec.rfind("table:", 0) == 0) return read_table(spec.substr(6));
  throw Error(ErrorKind::InvalidDistribution, "unknown distribution spec '" + spec + "'");
}

}  // namespace netprice
