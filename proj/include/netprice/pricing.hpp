#pragma once

#include "netprice/distribution.hpp"
#include "netprice/network.hpp"
#include "netprice/types.hpp"

namespace netprice {

/** Linear increasing path for uniform externality g ∈ [0,1]; revenue T/(4T − 2g(T−1)). */
PolicyReport uniform_policy(double g, int T);

/** Smallest T reaching fraction q of the T → ∞ revenue: ⌈q/(1−q) · g/(2−g)⌉. */
int rounds_to_fraction(double g, double q);

/** Block-model policy with S = 1ᵀE⁻¹1; throws AssumptionViolated when the network conditions fail. */
PolicyReport block_policy(const BlockNetwork& net, int T);

/** p_t = (T−t)/D + (TS − (T−1))/D with D = 2TS − (T−1), returned chronologically. */
Vec block_prices(double s_sum, int T);
/** Equivalent form p_t = (TS − t + 1)/D. */
Vec block_prices_alternate(double s_sum, int T);
double block_revenue(double s_sum, int T);
/** TS/D² · (3/2·TS − 1/2·(T−1)). */
double block_welfare(double s_sum, int T);

PolicyReport nonuniform_policy(const BlockNetwork& net, const ValuationDistribution& dist, int T);

/** Per-group linear policy for price discrimination; requires E⁻¹ − A positive semidefinite. */
PolicyReport discrimination_policy(const BlockNetwork& net, int T);

/** Single-round per-group policy p = (Q + Qᵀ)⁻¹ Q 1 with Q = A(I − EA)⁻¹. */
PolicyReport static_policy(const BlockNetwork& net);

/** Largest g for which the two-period no-commitment solution is valid: (3 + √13)/2. */
double no_commitment_bound();

/**
 * Two-period policy without commitment. The path holds the first-round price and the on-path
 * second-round price; `extras` carries the history-dependent second price coefficients.
 */
PolicyReport no_commitment_two_period(double g);

/** Second-round price after a first-round adoption fraction `first_round_share`. */
double no_commitment_second_price(double g, double first_round_share);

/**
 * Constant 1/2 policy for the all-sales variant. With `with_limit`, also reports the
 * infinite-horizon revenue in extras["limit_revenue"].
 */
PolicyReport all_sales_policy(const BlockNetwork& net, int T, bool with_limit = false);

/** α ᵀ(EA)^t 1 for t = 0..count−1. */
Vec all_sales_mass_sequence(const BlockNetwork& net, int count);

}  // namespace netprice
