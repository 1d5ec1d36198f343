#pragma once

#include <iosfwd>
#include <string>

#include "ncfock/linalg.hpp"
#include "ncfock/ncpoly.hpp"

namespace ncfock {

// Finite model of the degree <= N part of the Fock space tensored with C^r.
struct Truncation {
  int d = 1;
  int N = 0;
  Eigen::Index r = 1;

  Eigen::Index dim() const;
  Eigen::Index index(const Word& alpha, Eigen::Index j) const;
  // Number of basis vectors of degree < k (start of the degree-k block).
  Eigen::Index block_start(int k) const;
  bool operator==(const Truncation& other) const = default;
};

struct MultMatrix {
  MatPoly symbol;
  Truncation dom;
  Truncation cod;
  Mat matrix;
  bool exact = false;
};

// L_k (x) I_r from degree N-1 into degree N (exact), or square on degree N
// with the top degree dropped when exact is false.
MultMatrix left_shift_matrix(int k, const Truncation& t, bool exact = true);
MultMatrix right_shift_matrix(int k, const Truncation& t, bool exact = true);

// Permutation (alpha, j) -> (reverse(alpha), j).
Mat transpose_unitary_matrix(const Truncation& t);

// F(L) from degree N_dom into degree N_dom + deg F; always exact.
MultMatrix multiplier_matrix(const MatPoly& f, int n_dom);

// F(L) from degree n_dom into degree n_cod; terms landing above n_cod are dropped.
MultMatrix multiplier_window(const MatPoly& f, int n_dom, int n_cod);

// Compression P_N F(L) P_N; coincides with P_N F(L) since F(L) never lowers degree.
MultMatrix window_compression(const MatPoly& f, int n);

// F(L) restricted to the largest exact domain inside a codomain window:
// domain = { x of degree <= N : deg F(L)x <= N }.
struct WindowOperator {
  MatPoly symbol;
  Truncation dom;  // degree N, dim cols
  Truncation cod;  // degree N, dim rows
  Mat domain;      // dom.dim x k, orthonormal columns spanning the exact domain
  Mat op;          // cod.dim x k, F(L) * domain
};

WindowOperator window_operator(const MatPoly& f, int n);

Vec poly_to_vec(const MatPoly& p, const Truncation& t);
MatPoly vec_to_poly(const Vec& v, const Truncation& t);

// Vectors of the rows x cols symbol columns at the vacuum: column j is F(L)(1 (x) e_j).
Mat symbol_columns(const MatPoly& f, const Truncation& cod);
// Inverse of symbol_columns: columns are coefficient vectors in cod.
MatPoly columns_to_symbol(const Mat& cols, const Truncation& cod);

// Embeds a vector of a smaller window into a larger one (same d, r).
Mat embed_rows(const Mat& m, const Truncation& from, const Truncation& to);
// Keeps only the rows of degree <= to.N.
Mat truncate_rows(const Mat& m, const Truncation& from, const Truncation& to);

// "rows,cols" header then one line per row of re,im pairs.
void write_matrix_csv(std::ostream& os, const Mat& m);
Mat read_matrix_csv(std::istream& is);
Mat read_matrix_csv_file(const std::string& path);
void write_matrix_csv_file(const std::string& path, const Mat& m);

}  // namespace ncfock
