#pragma once

#include <Eigen/Dense>
#include <complex>

namespace ncfock {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// max(rows, cols) * machine epsilon * largest singular value.
double default_rank_tol(const Mat& a);

double spectral_norm(const Mat& a);

// Orthonormal basis of the column space; singular values <= tol are dropped.
// A negative tol selects default_rank_tol.
Mat column_space(const Mat& a, double tol = -1.0);

// Orthonormal basis of the null space.
Mat null_space(const Mat& a, double tol = -1.0);

Mat pseudo_inverse(const Mat& a, double tol = -1.0);

struct PsdRoot {
  Mat root;
  double clamped = 0.0;  // magnitude of the most negative eigenvalue set to zero
};

// Square root of a Hermitian positive semidefinite matrix.
PsdRoot psd_sqrt(const Mat& a);

double min_hermitian_eigenvalue(const Mat& a);

// Largest distance between the spans of two orthonormal bases (0 when equal).
double subspace_distance(const Mat& q1, const Mat& q2);

// Columns of q1 not in span(q2): max residual norm.
double containment_residual(const Mat& q1, const Mat& q2);

// Rotate each column so its first entry of modulus > tol is real positive.
void canonical_phase(Mat& basis, double tol);

// Orthonormal basis of span(q) determined by the subspace alone: Gram-Schmidt
// of the reduced row echelon form of q^*, then canonical phases.
Mat canonical_basis(const Mat& q, double tol = 1e-10);

// Orthonormal basis of span(a) intersected with span(b) (both orthonormal).
// Default tol is a principal-angle threshold of 1e-8.
Mat intersect_spans(const Mat& a, const Mat& b, double tol = -1.0);

Mat kron(const Mat& a, const Mat& b);

}  // namespace ncfock
