#pragma once

#include "netprice/distribution.hpp"
#include "netprice/network.hpp"
#include "netprice/types.hpp"

/**
 * Limiting revenue objectives as functions of a price path. Paths are chronological; formulas
 * are written with p_t meaning the price with t rounds remaining.
 */
namespace netprice::objectives {

/**
 * Uniform externality g: Σ_{t≥2} p_t(p_{t−1} − p_t)/g + p_1(g + p_T(1−g) − p_1)/g.
 * At g = 0 the value is p(1 − p) on constant paths and −∞ otherwise.
 */
double uniform(double g, const Vec& chronological);
/** Gradient of `uniform` in chronological order; requires g > 0. */
Vec uniform_gradient(double g, const Vec& chronological);

/** Block model with S = 1ᵀE⁻¹1: S Σ_{t≥2} p_t(p_{t−1} − p_t) + p_1 + (S − 1)p_1 p_T − S p_1². */
double block(double s_sum, const Vec& chronological);
Vec block_gradient(double s_sum, const Vec& chronological);

/** Σ_{t≥2} S p_t(p_{t−1} − p_t) + p_1(1 − S(p_1 − p_T) − F(p_T)). */
double nonuniform(double s_sum, const ValuationDistribution& dist, const Vec& chronological);

/**
 * Per-group discrimination objective with Einv = E⁻¹:
 * Σ_{t≥2} p_tᵀE⁻¹(p_{t−1} − p_t) + p_1ᵀA(1 − p_T) − p_1ᵀE⁻¹(p_1 − p_T).
 * `chronological` is T×m.
 */
double discrimination(const Mat& e_inv, const Vec& alpha, const Mat& chronological);

/**
 * All-sales variant: v_{T+1} = 1, v_t = p_t 1 − EA(1 − v_{t+1}), revenue Σ_t p_t αᵀ(v_{t+1} − v_t).
 */
double all_sales(const BlockNetwork& net, const Vec& chronological);

/**
 * Two buyers, two rounds, all-sales utilities, first-round price `first` and second-round price
 * `second`. Non-decreasing branch (first ≤ second).
 */
double two_buyer_nondecreasing(double g, double first, double second);
/** Non-increasing branch (first ≥ second, first − second ≤ g²); −∞ outside its feasible set. */
double two_buyer_nonincreasing(double g, double first, double second);

}  // namespace netprice::objectives
