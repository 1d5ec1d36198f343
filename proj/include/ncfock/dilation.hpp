#pragma once

#include <vector>

#include "ncfock/multops.hpp"

namespace ncfock {

// Subspace of a window carrying its own norm ||basis c||^2 = c^* gram c.
struct NormedSubspace {
  SubspaceRep space;
  Mat gram;

  // max ||basis c|| / ||c||_gram.
  double embedding_norm() const;
};

// ok iff sum_k X_k X_k^* <= I within tol; defect is the row norm.
Verdict is_row_contraction(const RowTuple& x, double tol = 1e-10);

// s_n = ||(X^*)^[n]|| = ||sum_{|alpha| = n} X^alpha (X^alpha)^*||^{1/2} for n = 0..n_max.
std::vector<double> purity_index(const RowTuple& x, int n_max);

// (I - sum_k X_k X_k^*)^{1/2}.
Mat defect_operator(const RowTuple& x, double tol = 1e-10);

enum class DefectFactor { Eigen, Qr };

struct PoissonKernel {
  Truncation window;   // coefficient dimension = rank of the defect
  Mat defect_factor;   // D with D^* D = I - sum_k X_k X_k^*
  Mat kernel;          // window.dim x n; word-alpha block is D (X_{a_1})^* ... (X_{a_k})^*
  double purity_residual = 0.0;      // ||sum_{|alpha| = N+1} X^alpha (X^alpha)^*||
  double isometry_defect = 0.0;      // ||K^* K - I||
  double intertwining_defect = 0.0;  // max_k ||(R_k^* (x) I) K - K X_k^*|| below the top degree
};

// Throws ImpureError when the purity residual exceeds tol. Defect eigenvalues
// at or below rank_tol are dropped; a negative rank_tol selects 64 n eps.
PoissonKernel poisson_kernel(const RowTuple& x, int n, double tol = 1e-10,
                             DefectFactor factor = DefectFactor::Eigen, double rank_tol = -1.0);

struct DilationEquivalence {
  Mat unitary;                    // coefficient unitary w with (I (x) w) K_a = K_b
  double unitary_defect = 0.0;    // ||w^* w - I|| + ||w w^* - I||
  double embedding_defect = 0.0;  // ||(I (x) w) K_a - K_b||
  double intertwining_defect = 0.0;
};

DilationEquivalence compare_dilations(const PoissonKernel& a, const PoissonKernel& b);

struct DbbResult {
  MatPoly symbol;
  RowTuple compression;        // X in orthonormal coordinates of M
  double contraction = 0.0;    // row norm of X
  double embedding_norm = 0.0;
  double symbol_norm = 0.0;    // norm of F(L) on the window operator
  double range_residual = 0.0;
  double gram_residual = 0.0;
  double isometry_defect = 0.0;  // of the Poisson kernel
};

// Recovers F with ran F(L) = M and range norm equal to the norm of M. Defect
// eigenvalues and symbol coefficients below tol (relative) are treated as zero.
DbbResult dbb_multiplier(const NormedSubspace& m, double tol = 1e-10);

// K minus the shifts of its elements of degree <= N - 1.
SubspaceRep wandering_basis(const SubspaceRep& k, double tol = 1e-10);

struct BeurlingResult {
  MatPoly theta;
  double isometry_defect = 0.0;
  double range_residual = 0.0;     // ran Theta(L) inside K
  double coverage_residual = 0.0;  // K below degree N - deg Theta inside ran Theta(L)
};

// Throws WindowOverflow when a wandering vector reaches the top degree.
BeurlingResult beurling_inner(const SubspaceRep& k, double tol = 1e-10);

}  // namespace ncfock
