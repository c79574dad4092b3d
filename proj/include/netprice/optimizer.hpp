#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "netprice/distribution.hpp"
#include "netprice/network.hpp"
#include "netprice/types.hpp"

namespace netprice {

enum class ObjectiveKind { Uniform, Block, Nonuniform, Discrimination, AllSalesTwoBuyer };

std::string to_string(ObjectiveKind kind);

/** One of the limiting revenue objectives together with its parameters. */
struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::Uniform;
  int T = 1;
  /** g for uniform and two-buyer specs, 1/S for block and nonuniform specs. */
  double g_eff = 0.0;
  std::optional<BlockNetwork> net;
  DistributionPtr dist;
  /** E⁻¹ for discrimination specs. */
  Mat e_inv;

  static ObjectiveSpec uniform(double g, int T);
  static ObjectiveSpec block(const BlockNetwork& net, int T);
  static ObjectiveSpec nonuniform(const BlockNetwork& net, DistributionPtr dist, int T);
  static ObjectiveSpec discrimination(const BlockNetwork& net, int T);
  static ObjectiveSpec all_sales_two_buyer(double g);

  /** Number of price columns a path for this spec must have. */
  int columns() const;
};

double evaluate_objective(const ObjectiveSpec& spec, const PricePath& path);

struct OptOptions {
  int starts = 16;
  std::uint64_t seed = 0;
  int max_iterations = 100000;
  double gradient_tolerance = 1e-10;
  /** Extra starting point tried alongside the multistart points. */
  std::optional<PricePath> initial;
};

struct OptResult {
  PricePath argmax;
  double value = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
};

/**
 * Multistart projected-gradient ascent followed by a Newton polish. Paths are projected onto
 * the box [0,1]; the two-buyer objective additionally requires a non-decreasing path.
 */
OptResult maximize(const ObjectiveSpec& spec, const OptOptions& options = {});

/** Coarse exhaustive grid over [0,1]^T for a scalar-path spec. */
OptResult grid_search(const ObjectiveSpec& spec, int points_per_axis);

struct HessianReport {
  Mat hessian;
  double max_eigenvalue = 0.0;
  bool passed = false;
};

/**
 * Builds the Hessian matrix associated with the spec: the tridiagonal-plus-corner matrix for
 * uniform and block specs, the density-corrected matrix at the fixed-point policy for
 * nonuniform specs, and the block Hessian for discrimination. Passes iff the largest
 * symmetric-part eigenvalue is at most 1e-10.
 */
HessianReport hessian_check(const ObjectiveSpec& spec);

/** Uniform-case matrix: −2 diagonal, 1 off-diagonal, corner 1 − g. */
Mat uniform_hessian_matrix(double g, int T);

struct KktReport {
  /** Multipliers μ_j for j = 1..T−1 on p_{j+1} ≤ p_j. */
  Vec multipliers;
  bool multipliers_nonnegative = false;
  double stationarity_residual = 0.0;
  double curvature = 0.0;
  bool passed = false;
};

/** Verifies the KKT conditions of the all-sales problem at p = 1/2; throws ConditionViolated on failure. */
KktReport kkt_check_all_sales(const BlockNetwork& net, int T);

struct TwoBuyerReport {
  double best_revenue = 0.0;
  PricePath best_path;
  std::string regime;
  double nondecreasing_revenue = 0.0;
  PricePath nondecreasing_path;
  double nonincreasing_revenue = 0.0;
  PricePath nonincreasing_path;
  /** Case 1–4 label for the non-increasing branch, determined by g. */
  int nonincreasing_case = 0;
  double nondecreasing_closed_form = 0.0;
  double nonincreasing_closed_form = 0.0;
};

/** Exhaustive grid over both price orderings of the two-buyer, two-round all-sales game. */
TwoBuyerReport two_buyer_all_sales_oracle(double g, int grid_points = 1001);

/** Closed-form optimal revenue of the non-increasing branch and its case number. */
std::pair<double, int> two_buyer_nonincreasing_closed_form(double g);

/**
 * Exact expected revenue of a two-round finite market. `first_round_cutoffs[i]` is buyer i's
 * first-round cutoff; the second-round cutoff is clamp(p_1 − Σ_{j∈S} G_ij) given first-round
 * buyers S. `prices` is chronological (first-round price, second-round price).
 */
double example1_enumerate(const PairwiseNetwork& G, const PricePath& prices,
                          const Vec& first_round_cutoffs);

}  // namespace netprice
