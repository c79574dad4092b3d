#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netprice/distribution.hpp"
#include "netprice/linalg.hpp"

namespace netprice {

/** Block model: m groups with mass fractions alpha and group-level externality matrix E. */
class BlockNetwork {
 public:
  BlockNetwork(Vec alpha, Mat E);

  /** Single group with E = [g]. */
  static BlockNetwork uniform(double g);

  int m() const { return static_cast<int>(alpha_.size()); }
  const Vec& alpha() const { return alpha_; }
  const Mat& E() const { return E_; }
  Mat A() const { return alpha_.asDiagonal(); }
  /** E·A. */
  Mat EA() const { return E_ * alpha_.asDiagonal(); }

 private:
  Vec alpha_;
  Mat E_;
};

/** Normalized uniform externality g ∈ [0,1]. */
struct UniformNetwork {
  explicit UniformNetwork(double g);
  double g;
  BlockNetwork as_block() const { return BlockNetwork::uniform(g); }
};

/** Per-pair weights g_ij for a finite market; zero diagonal, non-negative entries. */
struct PairwiseNetwork {
  explicit PairwiseNetwork(Mat G);
  int n() const { return static_cast<int>(G.rows()); }
  Mat G;
};

struct NetworkMeasures {
  double network_effect = 0.0;
  double s_sum = 0.0;
  Vec e_inv_ones;
  double asymmetry = 0.0;
};

/** One named check inside a validation report. */
struct Condition {
  std::string name;
  bool passed = true;
  std::string detail;
  std::optional<double> value;
  std::optional<double> at;
};

struct ValidationReport {
  std::string check;
  std::vector<Condition> conditions;

  bool passed() const;
  const Condition* first_failure() const;
  std::string summary() const;
};

/** s_sum = 1ᵀE⁻¹1 via a linear solve; throws SingularMatrix when E is singular. */
NetworkMeasures compute_measures(const BlockNetwork& net);

/** Σ_k d_k^out · d_k^in over the off-diagonal weights of C. */
double asymmetry(const Mat& C);

ValidationReport check_assumption2(const BlockNetwork& net);

/** Evaluates the density conditions at cell midpoints (i + 1/2)/grid_points. */
ValidationReport check_assumption3(const BlockNetwork& net, const ValuationDistribution& dist,
                                   int grid_points = 1001);

/** (I − βE)⁻¹1. */
Vec bonacich(const BlockNetwork& net, double beta);
Vec bonacich(const Mat& E, double beta);

/** Second-order expansion of block revenue under E = I + δC. */
double taylor_revenue(const Mat& C, int T, double delta);

/** First-order expansion of two-round discrimination revenue under E = I + δC. */
double taylor_revenue_discrimination(const Mat& C, const Vec& alpha, double delta);

enum class EdgeOrientation { Directed, Bidirectional };

/**
 * Equal-weight star (center 0), chain or ring adjacency on m nodes, scaled so the entries sum
 * to weight_sum. `family` is one of "star", "chain", "ring".
 */
Mat family_matrix(const std::string& family, int m, double weight_sum,
                  EdgeOrientation orientation = EdgeOrientation::Directed);

}  // namespace netprice
