#pragma once

#include "ncfock/fock.hpp"

namespace ncfock {

// Subspace of a window given by orthonormal columns in the ambient coordinates.
struct SubspaceRep {
  Truncation ambient;
  Mat basis;

  Eigen::Index dim() const { return basis.cols(); }
};

// Orthonormal basis of span(spanning) with canonical column phases.
SubspaceRep make_subspace(const Truncation& ambient, const Mat& spanning, double tol = -1.0);

struct Verdict {
  bool ok = false;
  double defect = 0.0;
};

// Largest residual of (R_k (x) I) applied to the elements of degree <= N-1 of
// the subspace, measured against the subspace.
double invariance_defect(const SubspaceRep& s);

// Largest residual of (R_k (x) I)^* applied to the subspace.
double coinvariance_defect(const SubspaceRep& s);

// Compares M (R_k (x) I) with (R_k (x) I) M on inputs of degree <= N_dom - 1.
Verdict is_left_multiplier(const Mat& m, const Truncation& dom, const Truncation& cod,
                           double tol = 1e-10);
Verdict is_left_multiplier(const MultMatrix& m, double tol = 1e-10);

SubspaceRep kernel_on_window(const MultMatrix& f, double tol = -1.0);

struct ConstantKernelSplit {
  Mat coefficient_basis;  // cols x k, orthonormal basis of the joint null space
  Eigen::Index window_kernel_dim = 0;
  bool reducing = false;  // window kernel equals window (x) coefficient_basis
};

ConstantKernelSplit constant_kernel_split(const MatPoly& f, int n_dom = 3, double tol = -1.0);

// Isometry defect ||M^* M - I||.
Verdict is_inner(const MultMatrix& f, double tol = 1e-10);

// Every column of f lies in the column space of g.
Verdict range_contains(const Mat& f, const Mat& g, double tol = -1.0);
Verdict range_contains(const MultMatrix& f, const MultMatrix& g, double tol = -1.0);
// Range containment on the codomain window of degree n.
Verdict range_contains(const MatPoly& f, const MatPoly& g, int n, double tol = -1.0);

struct DouglasResult {
  MatPoly factor;          // H with G H = F
  double residual = 0.0;   // largest coefficient of G H - F
  double window_residual = 0.0;  // least-squares residual of the vacuum solves
  double sigma = 0.0;      // norm of the minimal window factor
  double symbol_norm = 0.0;  // norm of multiplier_matrix(H, N - deg H)
};

// Solves G(L) x_j = F(L)(1 (x) e_j) by minimum-norm least squares on the
// codomain window of degree n and reads off the factor symbol. tol bounds both
// the per-column residual and the singular values of G(L) that are inverted.
DouglasResult douglas_factor(const MatPoly& f, const MatPoly& g, int n, double tol = -1.0);

// Smallest eigenvalue of lambda^2 G G^* - F F^* on the codomain window.
double douglas_floor(const MatPoly& f, const MatPoly& g, int n, double lambda);

}  // namespace ncfock
