#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace netprice {

/** Valuation distribution on [0,1] with CDF F, density f, density derivative f′ and inverse CDF. */
class ValuationDistribution {
 public:
  virtual ~ValuationDistribution() = default;

  virtual double cdf(double x) const = 0;
  virtual double pdf(double x) const = 0;
  virtual double pdf_derivative(double x) const = 0;
  virtual double inverse_cdf(double u) const;
  /** ∫_a^b x f(x) dx. */
  virtual double partial_expectation(double a, double b) const;
  virtual std::string name() const = 0;
};

using DistributionPtr = std::shared_ptr<const ValuationDistribution>;

/** F(v) = v. */
class UniformDistribution final : public ValuationDistribution {
 public:
  double cdf(double x) const override;
  double pdf(double x) const override;
  double pdf_derivative(double x) const override;
  double inverse_cdf(double u) const override;
  double partial_expectation(double a, double b) const override;
  std::string name() const override { return "uniform"; }
};

/** F(v) = v^k for k > 0. */
class PowerDistribution final : public ValuationDistribution {
 public:
  explicit PowerDistribution(double k);
  double exponent() const { return k_; }
  double cdf(double x) const override;
  double pdf(double x) const override;
  double pdf_derivative(double x) const override;
  double inverse_cdf(double u) const override;
  double partial_expectation(double a, double b) const override;
  std::string name() const override;

 private:
  double k_;
};

/** Distribution given by caller-supplied F, f and f′; inversion by bisection. */
class FunctionDistribution final : public ValuationDistribution {
 public:
  FunctionDistribution(std::string name, std::function<double(double)> cdf,
                       std::function<double(double)> pdf,
                       std::function<double(double)> pdf_derivative);
  double cdf(double x) const override { return cdf_(x); }
  double pdf(double x) const override { return pdf_(x); }
  double pdf_derivative(double x) const override { return dpdf_(x); }
  std::string name() const override { return name_; }

 private:
  std::string name_;
  std::function<double(double)> cdf_, pdf_, dpdf_;
};

/**
 * CDF tabulated on a strictly increasing grid from (0, 0) to (1, 1), interpolated by a
 * monotone piecewise-cubic Hermite (Fritsch–Carlson) curve.
 */
class TableDistribution final : public ValuationDistribution {
 public:
  TableDistribution(std::vector<double> x, std::vector<double> F);
  double cdf(double x) const override;
  double pdf(double x) const override;
  double pdf_derivative(double x) const override;
  std::string name() const override { return "table"; }

 private:
  std::size_t segment(double x) const;
  std::vector<double> x_, F_, slope_;
};

/** Parses `uniform`, `power:k` or `table:<file>` (two comma-separated columns x,F). */
DistributionPtr make_distribution(const std::string& spec);

DistributionPtr uniform_distribution();

}  // namespace netprice
