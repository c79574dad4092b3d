#include <gtest/gtest.h>

#include "netprice/error.hpp"
#include "netprice/linalg.hpp"

using namespace netprice;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidParameter;
}

}  // namespace

TEST(Linalg, SolveMatchesHandComputedSystem) {
  Mat M(2, 2);
  M << 2, 1, 1, 3;
  Vec b(2);
  b << 3, 5;
  const Vec x = solve(M, b);
  EXPECT_NEAR(x[0], 0.8, 1e-14);
  EXPECT_NEAR(x[1], 1.4, 1e-14);
}

TEST(Linalg, SolveWithMatrixRightHandSideGivesInverse) {
  Mat M(2, 2);
  M << 4, 7, 2, 6;
  const Mat inv = solve(M, Mat(Mat::Identity(2, 2)));
  EXPECT_NEAR(inv(0, 0), 0.6, 1e-14);
  EXPECT_NEAR(inv(0, 1), -0.7, 1e-14);
  EXPECT_NEAR(inv(1, 0), -0.2, 1e-14);
  EXPECT_NEAR(inv(1, 1), 0.4, 1e-14);
}

TEST(Linalg, SingularMatricesAreRejected) {
  Mat M(2, 2);
  M << 1, 2, 2, 4;
  EXPECT_TRUE(is_singular(M));
  EXPECT_EQ(kind_of([&] { solve(M, ones(2)); }), ErrorKind::SingularMatrix);
  EXPECT_EQ(kind_of([&] { solve(Mat(Mat::Zero(3, 3)), ones(3)); }), ErrorKind::SingularMatrix);
  Mat nearly(2, 2);
  nearly << 1, 1, 1, 1 + 1e-14;
  EXPECT_TRUE(is_singular(nearly));
  EXPECT_FALSE(is_singular(Mat(Mat::Identity(3, 3))));
}

TEST(Linalg, ShapeMismatchIsReported) {
  EXPECT_EQ(kind_of([] { solve(Mat(Mat::Identity(2, 3)), ones(2)); }), ErrorKind::ShapeMismatch);
  EXPECT_EQ(kind_of([] { solve(Mat(Mat::Identity(2, 2)), ones(3)); }), ErrorKind::ShapeMismatch);
}

TEST(Linalg, SymmetricEigenvaluesUseSymmetricPart) {
  Mat M(2, 2);
  M << 1, 4, 0, 1;
  EXPECT_NEAR(max_sym_eigenvalue(M), 3.0, 1e-12);
  EXPECT_NEAR(min_sym_eigenvalue(M), -1.0, 1e-12);
}

TEST(Linalg, SpectralRadiusOfRotationAndDiagonal) {
  Mat R(2, 2);
  R << 0, -2, 2, 0;
  EXPECT_NEAR(spectral_radius(R), 2.0, 1e-12);
  Mat D = Mat::Zero(3, 3);
  D.diagonal() << 0.5, -0.9, 0.1;
  EXPECT_NEAR(spectral_radius(D), 0.9, 1e-12);
}

TEST(Linalg, OnesVector) {
  const Vec v = ones(4);
  EXPECT_EQ(v.size(), 4);
  EXPECT_DOUBLE_EQ(v.sum(), 4.0);
}
