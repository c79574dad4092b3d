#pragma once

#include <Eigen/Dense>

namespace netprice {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/** Relative pivot threshold below which a matrix is treated as singular. */
inline constexpr double kSingularPivotTolerance = 1e-12;

/** True when partial-pivot LU of `M` has a pivot below kSingularPivotTolerance * max|M|. */
bool is_singular(const Mat& M);

/** Solves M x = b by partial-pivot LU; throws SingularMatrix when `is_singular(M)`. */
Vec solve(const Mat& M, const Vec& b);
Mat solve(const Mat& M, const Mat& B);

/** Extreme eigenvalues of the symmetric part (M + Mᵀ)/2. */
double max_sym_eigenvalue(const Mat& M);
double min_sym_eigenvalue(const Mat& M);

double spectral_radius(const Mat& M);

Vec ones(Eigen::Index n);

}  // namespace netprice
