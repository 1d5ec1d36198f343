#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ncfock/dilation.hpp"
#include "ncfock/errors.hpp"
#include "ncfock/rkhs.hpp"
#include "support.hpp"

using namespace ncfock;
using ncfock::testing::random_mat;
using ncfock::testing::random_poly;

namespace {

Mat unit(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  Mat m = Mat::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

RowTuple scalar_tuple(double x) { return RowTuple({Mat::Constant(1, 1, x)}); }

// Strictly upper triangular entries scaled to a row contraction.
RowTuple random_nilpotent(std::mt19937& rng, int d, Eigen::Index n) {
  std::vector<Mat> entries;
  for (int k = 0; k < d; ++k) entries.push_back(random_mat(rng, n, n).triangularView<Eigen::StrictlyUpper>());
  RowTuple x(entries);
  double norm = x.row_norm();
  if (norm > 0) {
    for (Mat& e : x.entries) e *= 0.9 / norm;
  }
  return x;
}

NormedSubspace ambient_subspace(const Truncation& t, const Mat& spanning) {
  SubspaceRep s = make_subspace(t, spanning);
  return {s, Mat::Identity(s.dim(), s.dim())};
}

NormedSubspace from_range(const RangeSpace& r) { return {r.subspace(), r.gram}; }

}  // namespace

TEST(Dilation, RowContractionExamples) {
  EXPECT_TRUE(is_row_contraction(RowTuple(2, 3)).ok);
  EXPECT_EQ(is_row_contraction(RowTuple(2, 3)).defect, 0.0);
  Verdict v = is_row_contraction(RowTuple({unit(2, 0, 1), unit(2, 1, 0)}));
  EXPECT_TRUE(v.ok);
  EXPECT_NEAR(v.defect, 1.0, 1e-15);
  EXPECT_FALSE(is_row_contraction(scalar_tuple(1.1)).ok);
}

TEST(Dilation, PurityIndexExamples) {
  std::mt19937 rng(1);
  RowTuple nil = random_nilpotent(rng, 2, 4);
  std::vector<double> s = purity_index(nil, 6);
  for (int n = 4; n <= 6; ++n) EXPECT_LT(s[n], 1e-15);
  for (int n = 1; n <= 6; ++n) EXPECT_LE(s[n], s[n - 1] + 1e-15);
  for (double x : purity_index(scalar_tuple(1.0), 5)) EXPECT_EQ(x, 1.0);
  std::vector<double> half = purity_index(scalar_tuple(0.5), 5);
  for (int n = 0; n <= 5; ++n) EXPECT_NEAR(half[n], std::pow(0.5, n), 1e-15);
}

TEST(Dilation, DefectOperatorExamples) {
  EXPECT_NEAR(defect_operator(scalar_tuple(0.0))(0, 0).real(), 1.0, 1e-15);
  Mat d = defect_operator(RowTuple({unit(2, 0, 1)}));
  EXPECT_LT((d - unit(2, 1, 1)).norm(), 1e-14);
  Mat c = defect_operator(RowTuple({unit(2, 0, 1), unit(2, 1, 0)}));
  EXPECT_LT(c.norm(), 1e-7);
  EXPECT_THROW(defect_operator(scalar_tuple(1.1)), NotContractive);
}

TEST(Dilation, PoissonKernelOfZero) {
  PoissonKernel pk = poisson_kernel(RowTuple(2, 3), 3);
  EXPECT_EQ(pk.window.r, 3);
  Mat expect = Mat::Zero(pk.window.dim(), 3);
  expect.topRows(3).setIdentity();
  EXPECT_LT((pk.kernel - expect).norm(), 1e-15);
}

TEST(Dilation, PoissonKernelOfJordanBlock) {
  PoissonKernel pk = poisson_kernel(RowTuple({unit(2, 0, 1)}), 3);
  ASSERT_EQ(pk.window.r, 1);
  // K e1 = z (x) e2 and K e2 = 1 (x) e2, with the defect row normalized to e2^*.
  Mat expect = Mat::Zero(4, 2);
  expect(1, 0) = 1.0;
  expect(0, 1) = 1.0;
  EXPECT_LT((pk.kernel - expect).norm(), 1e-15);
  EXPECT_LT(pk.isometry_defect, 1e-15);
  EXPECT_LT(pk.intertwining_defect, 1e-15);
}

TEST(Dilation, PoissonKernelRandomNilpotent) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    int d = 1 + trial % 3;
    Eigen::Index n = 2 + trial % 4;
    RowTuple x = random_nilpotent(rng, d, n);
    PoissonKernel a = poisson_kernel(x, static_cast<int>(n));
    EXPECT_LT(a.isometry_defect, 1e-10);
    EXPECT_LT(a.intertwining_defect, 1e-12);
    PoissonKernel b = poisson_kernel(x, static_cast<int>(n), 1e-10, DefectFactor::Qr);
    DilationEquivalence eq = compare_dilations(a, b);
    EXPECT_LT(eq.unitary_defect, 1e-8);
    EXPECT_LT(eq.embedding_defect, 1e-8);
    EXPECT_LT(eq.intertwining_defect, 1e-12);
  }
}

TEST(Dilation, PoissonKernelReportsImpurity) {
  try {
    poisson_kernel(scalar_tuple(0.5), 3);
    FAIL() << "expected impurity";
  } catch (const ImpureError& e) {
    EXPECT_NEAR(e.residual(), std::pow(0.25, 4), 1e-15);
  }
  PoissonKernel pk = poisson_kernel(scalar_tuple(0.5), 30);
  EXPECT_NEAR(pk.isometry_defect, pk.purity_residual, 1e-15);
}

TEST(Dilation, DbbRecoversShift) {
  Truncation t{1, 5, 1};
  DbbResult r = dbb_multiplier(from_range(build_range_space(parse_ncpoly("z1", 1), t.N)));
  EXPECT_LT(symbol_distance(r.symbol, parse_ncpoly("z1", 1)), 1e-12);
  EXPECT_NEAR(r.symbol_norm, 1.0, 1e-12);
  EXPECT_NEAR(r.embedding_norm, 1.0, 1e-12);
}

TEST(Dilation, DbbRecoversScaledIdentity) {
  Truncation t{2, 3, 1};
  Mat all = Mat::Identity(t.dim(), t.dim());
  NormedSubspace m{make_subspace(t, all), 2.0 * Mat::Identity(t.dim(), t.dim())};
  DbbResult r = dbb_multiplier(m);
  EXPECT_LT(symbol_distance(r.symbol, MatPoly::identity(2, 1).scaled(1 / std::sqrt(2.0))), 1e-12);
  EXPECT_NEAR(r.embedding_norm, 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r.symbol_norm, r.embedding_norm, 1e-12);
}

TEST(Dilation, DbbRecoversRowOfLetters) {
  Truncation t{2, 3, 1};
  Mat upper = Mat::Identity(t.dim(), t.dim()).rightCols(t.dim() - 1);
  DbbResult r = dbb_multiplier(ambient_subspace(t, upper));
  ASSERT_EQ(r.symbol.cols(), 2);
  EXPECT_EQ(r.symbol.degree(), 1);
  Mat stacked(2, 2);
  stacked << r.symbol.coeff({1}), r.symbol.coeff({2});
  EXPECT_LT((stacked.adjoint() * stacked - Mat::Identity(2, 2)).norm(), 1e-12);
  EXPECT_LT(r.symbol.coeff({}).norm(), 1e-14);
  EXPECT_LT(r.range_residual, 1e-12);
}

TEST(Dilation, DbbRoundTripRandomSymbols) {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 8; ++trial) {
    int d = 1 + trial % 2;
    Eigen::Index rows = 1 + trial % 2;
    MatPoly f = random_poly(rng, d, 1 + trial % 2, rows, 1);
    const int n = 4;
    RangeSpace m = build_range_space(f, n);
    DbbResult r = dbb_multiplier(from_range(m));
    EXPECT_LT(r.range_residual, 1e-8) << trial;
    EXPECT_LT(r.gram_residual, 1e-8) << trial;
    EXPECT_NEAR(r.symbol_norm, r.embedding_norm, 1e-8) << trial;
  }
}

TEST(Dilation, DbbRejectsNonInvariantSubspace) {
  Truncation t{1, 3, 1};
  Mat z = Mat::Zero(t.dim(), 1);
  z(1, 0) = 1.0;
  EXPECT_THROW(dbb_multiplier(ambient_subspace(t, z)), DomainError);
}

TEST(Dilation, WanderingExamples) {
  Truncation t{2, 3, 1};
  Mat upper = Mat::Identity(t.dim(), t.dim()).rightCols(t.dim() - 1);
  SubspaceRep w = wandering_basis(make_subspace(t, upper));
  EXPECT_LT(subspace_distance(w.basis, Mat::Identity(t.dim(), t.dim()).middleCols(1, 2)), 1e-14);

  Truncation s{1, 5, 1};
  Mat high = Mat::Identity(s.dim(), s.dim()).rightCols(s.dim() - 2);
  SubspaceRep w2 = wandering_basis(make_subspace(s, high));
  ASSERT_EQ(w2.dim(), 1);
  EXPECT_NEAR(std::abs(w2.basis(2, 0)), 1.0, 1e-14);

  EXPECT_EQ(wandering_basis(SubspaceRep{s, Mat(s.dim(), 0)}).dim(), 0);
}

TEST(Dilation, BeurlingExamples) {
  Truncation t{2, 3, 1};
  Mat upper = Mat::Identity(t.dim(), t.dim()).rightCols(t.dim() - 1);
  BeurlingResult a = beurling_inner(make_subspace(t, upper));
  EXPECT_EQ(a.theta, parse_ncpoly("[[z1, z2]]", 2));
  EXPECT_LT(a.isometry_defect, 1e-14);
  EXPECT_LT(a.coverage_residual, 1e-12);

  Truncation s{1, 5, 1};
  BeurlingResult b = beurling_inner(make_subspace(s, Mat::Identity(s.dim(), s.dim()).rightCols(s.dim() - 2)));
  EXPECT_EQ(b.theta, parse_ncpoly("z1*z1", 1));

  SubspaceRep k = kernel_on_window(multiplier_matrix(parse_ncpoly("[[z1, z1*z1]]", 1), 5));
  BeurlingResult c = beurling_inner(k);
  MatPoly expect = parse_ncpoly("[[-z1], [1]]", 1).scaled(1 / std::sqrt(2.0));
  EXPECT_LT(symbol_distance(c.theta, expect), 1e-14);
  EXPECT_LT(c.isometry_defect, 1e-14);
  EXPECT_LT(c.range_residual, 1e-14);
  EXPECT_LT(c.coverage_residual, 1e-12);
}

TEST(Dilation, BeurlingDetectsOverflow) {
  RangeSpace outer = build_range_space(parse_ncpoly("1 - 0.5*z1", 1), 5);
  EXPECT_THROW(beurling_inner(outer.subspace()), WindowOverflow);
}
