#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netprice/linalg.hpp"

namespace netprice {

/**
 * Prices in chronological order: row r - 1 holds round r. A single column is a uniform price;
 * m columns give per-group prices. Round r has t = T + 1 - r rounds remaining.
 */
class PricePath {
 public:
  PricePath() = default;
  explicit PricePath(Mat prices);

  static PricePath scalar(const Vec& chronological);
  static PricePath per_group(const Mat& chronological);
  /** Builds from a vector indexed by rounds remaining: element t - 1 is p_t. */
  static PricePath from_remaining(const Vec& by_remaining);

  int T() const { return static_cast<int>(prices_.rows()); }
  int columns() const { return static_cast<int>(prices_.cols()); }
  bool is_per_group() const { return prices_.cols() > 1; }
  const Mat& prices() const { return prices_; }

  /** Price in chronological round r (1-based) for group i. */
  double at_round(int r, int group = 0) const;
  /** Price with t rounds remaining for group i. */
  double at_remaining(int t, int group = 0) const;
  /** Price vector over m groups with t rounds remaining; scalar paths broadcast. */
  Vec remaining_vector(int t, int m) const;

 private:
  Mat prices_;
};

/** Cutoffs v[t][i] for t = 1..T+1 rounds remaining; row t - 1 of `v`, with row T equal to 1. */
struct ThresholdSchedule {
  Mat v;
  bool clamped = false;

  int T() const { return static_cast<int>(v.rows()) - 1; }
  int m() const { return static_cast<int>(v.cols()); }
  double at(int t, int group) const { return v(t - 1, group); }
};

struct PolicyReport {
  PricePath path;
  double normalized_revenue = 0.0;
  std::optional<ThresholdSchedule> thresholds;
  std::optional<double> welfare;
  /** T×m cumulative purchases divided by n, in chronological rounds. */
  std::optional<Mat> adoption;
  std::vector<std::string> warnings;
  std::map<std::string, double> extras;
};

}  // namespace netprice
