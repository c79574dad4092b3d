#pragma once

#include <optional>

#include "netprice/distribution.hpp"
#include "netprice/network.hpp"
#include "netprice/types.hpp"

namespace netprice {

/**
 * Limiting equilibrium cutoffs for a committed, chronologically non-decreasing path.
 * Runs the indifference recursion from the first round backward to the last; values are
 * clamped to [0,1] and `clamped` is set when clamping binds.
 */
ThresholdSchedule thresholds_for_prices(const BlockNetwork& net, const ValuationDistribution& dist,
                                        const PricePath& path);

/** Earliest chronological round whose cutoff the valuation meets; nullopt means never buys. */
std::optional<int> buyer_purchase_round(double valuation, int group, const ThresholdSchedule& sched);

/** Σ_t p_tᵀ A (F(v_{t+1}) − F(v_t)). */
double limit_revenue_of_path(const BlockNetwork& net, const ValuationDistribution& dist,
                             const PricePath& path);

/** Limiting welfare: valuation plus externality from earlier purchases, per buyer. */
double limit_welfare_of_path(const BlockNetwork& net, const ValuationDistribution& dist,
                             const PricePath& path);
double welfare_from_thresholds(const BlockNetwork& net, const ValuationDistribution& dist,
                               const ThresholdSchedule& sched);

/** T×m matrix; row r - 1 is α_i(1 − F(v_t)) after chronological round r. */
Mat adoption_from_thresholds(const BlockNetwork& net, const ValuationDistribution& dist,
                             const ThresholdSchedule& sched);

}  // namespace netprice
