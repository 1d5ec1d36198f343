#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "ncfock/errors.hpp"
#include "ncfock/fock.hpp"
#include "support.hpp"

using namespace ncfock;
using ncfock::testing::random_poly;

namespace {

// Column-by-column image of basis monomials, computed through symbol products.
Mat multiplier_oracle(const MatPoly& f, int n_dom) {
  Truncation dom{f.d(), n_dom, f.cols()};
  Truncation cod{f.d(), n_dom + f.window_degree(), f.rows()};
  Mat out(cod.dim(), dom.dim());
  for (const Word& b : words_up_to(f.d(), n_dom)) {
    for (Eigen::Index j = 0; j < f.cols(); ++j) {
      Mat e = Mat::Zero(f.cols(), 1);
      e(j, 0) = 1;
      MatPoly x = MatPoly::monomial(f.d(), b, e);
      out.col(dom.index(b, j)) = poly_to_vec(nc_mul(f, x), cod);
    }
  }
  return out;
}

}  // namespace

TEST(Fock, TruncationIndexing) {
  Truncation t{2, 3, 2};
  EXPECT_EQ(t.dim(), 30);
  EXPECT_EQ(t.index({1, 2}, 1), 9);
  EXPECT_EQ(t.block_start(2), 6);
}

TEST(Fock, LeftShiftOnMonomial) {
  Truncation t{2, 3, 1};
  MultMatrix l1 = left_shift_matrix(1, t);
  Truncation dom = l1.dom;
  Vec x = poly_to_vec(MatPoly::variable(2, 2), dom);
  Vec y = l1.matrix * x;
  EXPECT_EQ(vec_to_poly(y, t), MatPoly::monomial(2, {1, 2}, Mat::Ones(1, 1)));
}

TEST(Fock, RightShiftOnMonomial) {
  Truncation t{2, 3, 1};
  MultMatrix r1 = right_shift_matrix(1, t);
  Vec y = r1.matrix * poly_to_vec(MatPoly::variable(2, 2), r1.dom);
  EXPECT_EQ(vec_to_poly(y, t), MatPoly::monomial(2, {2, 1}, Mat::Ones(1, 1)));
}

TEST(Fock, ShiftRelations) {
  for (int d = 1; d <= 3; ++d) {
    Truncation t{d, 4, 2};
    for (int k = 1; k <= d; ++k) {
      for (int j = 1; j <= d; ++j) {
        Mat lk = left_shift_matrix(k, t).matrix, lj = left_shift_matrix(j, t).matrix;
        Mat rk = right_shift_matrix(k, t).matrix, rj = right_shift_matrix(j, t).matrix;
        Mat expect = Mat::Zero(lk.cols(), lk.cols());
        if (k == j) expect.setIdentity();
        EXPECT_EQ(lk.adjoint() * lj, expect);
        EXPECT_EQ(rk.adjoint() * rj, expect);
      }
    }
  }
}

TEST(Fock, RowIsometryDefectIsVacuumProjection) {
  Truncation t{3, 3, 2};
  Mat sum = Mat::Zero(t.dim(), t.dim());
  for (int k = 1; k <= 3; ++k) {
    Mat l = left_shift_matrix(k, t).matrix;
    sum += l * l.adjoint();
  }
  Mat expect = Mat::Identity(t.dim(), t.dim());
  expect.topLeftCorner(2, 2).setZero();
  EXPECT_EQ(sum, expect);
}

TEST(Fock, TransposeUnitaryConjugatesShifts) {
  for (int d = 1; d <= 3; ++d) {
    Truncation t{d, 4, 1};
    Mat u_cod = transpose_unitary_matrix(t);
    Mat u_dom = transpose_unitary_matrix(Truncation{d, 3, 1});
    EXPECT_EQ(u_cod * u_cod, Mat::Identity(t.dim(), t.dim()));
    EXPECT_EQ(u_cod.adjoint(), u_cod);
    for (int k = 1; k <= d; ++k) {
      EXPECT_EQ(u_cod * left_shift_matrix(k, t).matrix * u_dom, right_shift_matrix(k, t).matrix);
    }
  }
  Truncation t{2, 2, 1};
  Vec v = transpose_unitary_matrix(t) * poly_to_vec(parse_ncpoly("z1*z2", 2), t);
  EXPECT_EQ(vec_to_poly(v, t), parse_ncpoly("z2*z1", 2));
}

TEST(Fock, MultiplierMatrixExamples) {
  Truncation t{2, 4, 1};
  EXPECT_EQ(multiplier_matrix(MatPoly::variable(2, 1), 3).matrix, left_shift_matrix(1, t).matrix);
  MultMatrix row = multiplier_matrix(parse_ncpoly("[[z1, z2]]", 2), 3);
  EXPECT_TRUE(row.exact);
  EXPECT_NEAR((row.matrix.adjoint() * row.matrix - Mat::Identity(row.dom.dim(), row.dom.dim())).norm(), 0, 0);
  Mat a(2, 2);
  a << 1, 2, 3, 4;
  MultMatrix c = multiplier_matrix(MatPoly::constant(2, a), 2);
  EXPECT_EQ(c.matrix, kron(Mat::Identity(7, 7), a));
}

TEST(Fock, MultiplierMatrixMatchesProductOracle) {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    int d = 1 + trial % 3;
    MatPoly f = random_poly(rng, d, 2, 2, 1 + trial % 2);
    EXPECT_LT((multiplier_matrix(f, 2).matrix - multiplier_oracle(f, 2)).norm(), 1e-13);
  }
}

TEST(Fock, LeftMultipliersIntertwineRightShifts) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    int d = 1 + trial % 3;
    MatPoly f = random_poly(rng, d, 2, 2, 3);
    int n = 3;
    Mat m_small = multiplier_matrix(f, n - 1).matrix;
    Mat m_big = multiplier_matrix(f, n).matrix;
    for (int k = 1; k <= d; ++k) {
      Mat r_dom = right_shift_matrix(k, Truncation{d, n, f.cols()}).matrix;
      Mat r_cod = right_shift_matrix(k, Truncation{d, n + 2, f.rows()}).matrix;
      EXPECT_LT((m_big * r_dom - r_cod * m_small).norm(), 1e-13);
    }
  }
}

TEST(Fock, NormMonotoneAndApproachesRootTwo) {
  MatPoly f = parse_ncpoly("z1 + z2", 2);
  double prev = 0.0;
  for (int n = 0; n <= 7; ++n) {
    double s = spectral_norm(multiplier_matrix(f, n).matrix);
    EXPECT_GE(s, prev - 1e-14);
    EXPECT_LE(s, std::sqrt(2.0) + 1e-12);
    prev = s;
  }
  EXPECT_NEAR(prev, std::sqrt(2.0), 1e-12);
}

TEST(Fock, PolyVecRoundTrip) {
  Truncation t{2, 3, 1};
  Vec v = poly_to_vec(MatPoly::identity(2, 1), t);
  EXPECT_EQ(v(0), cplx(1, 0));
  EXPECT_NEAR(poly_to_vec(parse_ncpoly("z1+z2", 2), t).norm(), std::sqrt(2.0), 1e-15);
  std::mt19937 rng(4);
  Truncation t2{3, 3, 2};
  MatPoly p = random_poly(rng, 3, 3, 2, 1);
  EXPECT_EQ(vec_to_poly(poly_to_vec(p, t2), t2), p);
  EXPECT_THROW(poly_to_vec(p, Truncation{3, 2, 2}), WindowOverflow);
}

TEST(Fock, WindowOperatorDomainIsExact) {
  MatPoly f = parse_ncpoly("[[z1, 1]]", 2);
  WindowOperator w = window_operator(f, 3);
  // z1 column allows degree <= 2 inputs, constant column degree <= 3.
  EXPECT_EQ(w.domain.cols(), 7 + 15);
  MultMatrix full = multiplier_matrix(f, 3);
  Mat image = full.matrix * w.domain;
  EXPECT_LT(image.bottomRows(full.cod.dim() - w.cod.dim()).norm(), 1e-13);
}

TEST(Fock, CsvRoundTrip) {
  Mat m(2, 3);
  m << cplx(1, -2), cplx(0.1, 1e-300), 3, cplx(1.0 / 3.0, 0), 0, cplx(-7, 2.5);
  std::stringstream ss;
  write_matrix_csv(ss, m);
  EXPECT_EQ(ss.str().substr(0, 4), "2,3\n");
  Mat back = read_matrix_csv(ss);
  EXPECT_EQ(back, m);
}
