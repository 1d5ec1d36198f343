#pragma once

#include <map>
#include <string>
#include <vector>

#include "ncfock/linalg.hpp"
#include "ncfock/words.hpp"

namespace ncfock {

// Operator-valued polynomial in d noncommuting variables: word -> rows x cols
// coefficient. Zero coefficients are never stored.
class MatPoly {
 public:
  using Terms = std::map<Word, Mat, GradedLess>;

  MatPoly() = default;
  MatPoly(int d, Eigen::Index rows, Eigen::Index cols);

  static MatPoly constant(int d, const Mat& value);
  static MatPoly identity(int d, Eigen::Index size);
  static MatPoly monomial(int d, const Word& alpha, const Mat& value);
  // Scalar variable z_k.
  static MatPoly variable(int d, int k);

  int d() const { return d_; }
  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // Largest word length with a nonzero coefficient; -1 for the zero polynomial.
  int degree() const;
  // Degree with the zero polynomial counted as 0 (window sizing).
  int window_degree() const { return is_zero() ? 0 : degree(); }

  Mat coeff(const Word& alpha) const;
  // Adds value to the coefficient of alpha (dropping it if it becomes zero).
  void add_term(const Word& alpha, const Mat& value);
  void set_coeff(const Word& alpha, const Mat& value);

  MatPoly column(Eigen::Index j) const;
  MatPoly columns(Eigen::Index start, Eigen::Index count) const;
  MatPoly top_rows(Eigen::Index count) const;
  MatPoly bottom_rows(Eigen::Index count) const;
  MatPoly scaled(cplx s) const;
  MatPoly right_multiplied(const Mat& c) const;
  MatPoly left_multiplied(const Mat& c) const;

  // Drops coefficient entries of modulus <= tol.
  MatPoly cleaned(double tol) const;

  // Largest entry modulus over all coefficients.
  double max_abs() const;

  bool operator==(const MatPoly& other) const;

 private:
  int d_ = 1;
  Eigen::Index rows_ = 1;
  Eigen::Index cols_ = 1;
  Terms terms_;
};

// d-tuple of n x n matrices.
struct RowTuple {
  int d = 1;
  Eigen::Index n = 1;
  std::vector<Mat> entries;

  RowTuple() = default;
  RowTuple(int d, Eigen::Index n);
  explicit RowTuple(std::vector<Mat> mats);

  // The n x (n d) block [X_1 ... X_d].
  Mat row_block() const;
  static RowTuple from_row_block(const Mat& block, int d);
  // Largest singular value of the row block.
  double row_norm() const;
  // Product X_{a_1} ... X_{a_k}; identity for the empty word.
  Mat power(const Word& alpha) const;
  RowTuple adjoint_entries() const;
};

MatPoly nc_add(const MatPoly& p, const MatPoly& q);
MatPoly nc_sub(const MatPoly& p, const MatPoly& q);
MatPoly nc_mul(const MatPoly& p, const MatPoly& q);

// Block row [p | q].
MatPoly hconcat(const MatPoly& p, const MatPoly& q);
// Block column [p ; q].
MatPoly vconcat(const MatPoly& p, const MatPoly& q);
// Block diagonal diag(p, q).
MatPoly block_diag(const MatPoly& p, const MatPoly& q);

// Coefficient map alpha -> p_{reverse(alpha)}.
MatPoly transpose_symbol(const MatPoly& p);

// Sum over words of Z^alpha (x) p_alpha: an (n rows) x (n cols) matrix.
Mat eval_at_point(const MatPoly& p, const RowTuple& z);

// Largest coefficient-entry modulus of p - q.
double symbol_distance(const MatPoly& p, const MatPoly& q);

MatPoly parse_ncpoly(const std::string& text, int d);

std::string to_json(const MatPoly& p);
MatPoly from_json(const std::string& text);

// Human-readable rendering, e.g. "(1)*z1 + (2)*z1z2" for scalar symbols.
std::string to_string(const MatPoly& p);

}  // namespace ncfock
