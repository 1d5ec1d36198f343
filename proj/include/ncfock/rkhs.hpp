#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ncfock/fock.hpp"
#include "ncfock/multops.hpp"

namespace ncfock {

struct SzegoValue {
  Mat value;
  double tail_bound = 0.0;
  int cutoff = 0;
};

// Sum over |alpha| <= n of Z^alpha P (W^alpha)^*.
SzegoValue szego_eval(const RowTuple& z, const RowTuple& w, const Mat& p, int n);
// Cutoff chosen so the tail bound is below 1e-12.
SzegoValue szego_eval(const RowTuple& z, const RowTuple& w, const Mat& p);

int szego_cutoff(double a, double b, double p_norm, double target = 1e-12);

// Fock vector with <kernel_vector, poly_to_vec(f)> = y^* f(Z) v for f of
// degree <= t.N with t.r rows and one column; y in C^{n r}, v in C^n.
Vec kernel_vector(const RowTuple& z, const Vec& y, const Vec& v, const Truncation& t);

// F(Z) (K(Z,W)[P] (x) I) F(W)^*.
SzegoValue range_kernel_eval(const MatPoly& f, const RowTuple& z, const RowTuple& w, const Mat& p,
                             int n);

using KernelFn = std::function<Mat(const RowTuple&, const RowTuple&, const Mat&)>;

KernelFn szego_kernel(int n);
KernelFn range_kernel(const MatPoly& f, int n);
KernelFn kernel_join(KernelFn k1, KernelFn k2);

struct KernelSample {
  RowTuple point;
  Vec y;
  Vec v;
};

// Gram matrix [y_i^* K(Z_i, Z_j)[v_i v_j^*] y_j].
Mat kernel_gram(const KernelFn& k, const std::vector<KernelSample>& samples);

// Operator range inside an ambient window, normed so the generating operator
// is a co-isometry onto it.
struct RangeSpace {
  Truncation ambient;
  Mat basis;  // orthonormal columns in the ambient window
  Mat gram;   // ||basis c||^2 = c^* gram c
  std::optional<WindowOperator> op;

  Eigen::Index dim() const { return basis.cols(); }
  // Squared range norm of an ambient vector assumed to lie in the span.
  double norm2(const Vec& h) const;
  // Reproducing kernel as an ambient operator: basis gram^{-1} basis^*.
  Mat kernel_operator() const;
  SubspaceRep subspace() const { return SubspaceRep{ambient, basis}; }
};

RangeSpace range_space_of(const Mat& a, const Truncation& ambient, double tol = -1.0);
RangeSpace build_range_space(const MatPoly& f, int n, double tol = -1.0);

// Intersection normed by the sum of squared norms.
RangeSpace meet_norm_gram(const RangeSpace& m1, const RangeSpace& m2, double tol = -1.0);

// Coordinates of M1 (+) M2 are (c1, c2); `metric_root` maps them isometrically
// to C^{dim1 + dim2}. Both parts are orthonormal in those coordinates.
struct DirectSumSplit {
  Mat metric_root;
  Mat meet_part;
  Mat join_part;
  double orthogonality = 0.0;  // ||meet_part^* join_part||
  double span_residual = 0.0;  // distance between join_part and the kernel-sample span
};

DirectSumSplit decompose_direct_sum(const RangeSpace& m1, const RangeSpace& m2,
                                    double tol = -1.0);

// ||K1 x (+) K2 x||^2 in M1 (+) M2 and ||K x||^2 in the join, with K the kernel operators.
struct SumNormIdentity {
  double direct = 0.0;
  double joined = 0.0;
};

SumNormIdentity sum_norm_identity(const RangeSpace& m1, const RangeSpace& m2,
                                  const RangeSpace& joined, const Vec& x);

// Range space of (I - T T^*)^{1/2}.
RangeSpace complementary_space(const MultMatrix& t, double tol = 1e-10);

struct SupValue {
  double value = 0.0;
  bool finite = true;
};

// sup over m in M of ||h + m||^2 - ||m||_M^2, in closed form.
SupValue complement_norm_sup(const RangeSpace& m, const Vec& h, double tol = 1e-10);

// span(a) inside span(b) with ||h||_b <= ||h||_a.
struct Containment {
  double span_residual = 0.0;
  double margin = 0.0;  // smallest eigenvalue of G_a - T^* G_b T
  bool ok(double tol = 1e-10) const { return span_residual <= tol && margin >= -tol; }
};

Containment contractive_containment(const RangeSpace& a, const RangeSpace& b);

// Smallest generalized eigenvalue of ||h||^2 - |h(0)|^2 - sum_k ||R_k^* h||^2
// against ||h||^2 on H; throws DomainError if H is not coinvariant.
Verdict difference_quotient_check(const RangeSpace& h, double tol = 1e-10);

}  // namespace ncfock
