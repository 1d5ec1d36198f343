#include "ncfock/multops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ncfock/errors.hpp"

namespace ncfock {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double max_column_norm(const Mat& m) {
  double out = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) out = std::max(out, m.col(j).norm());
  return out;
}

// Columns of s spanning its elements with zero top-degree block.
Mat lower_part(const SubspaceRep& s) {
  const Truncation& t = s.ambient;
  Eigen::Index low = Truncation{t.d, t.N - 1, t.r}.dim();
  if (t.N == 0 || s.dim() == 0) return Mat(low, 0);
  Mat top = s.basis.bottomRows(t.dim() - low);
  Mat coeffs = null_space(top, 1e-12);
  return (s.basis * coeffs).topRows(low);
}

}  // namespace

SubspaceRep make_subspace(const Truncation& ambient, const Mat& spanning, double tol) {
  SubspaceRep out;
  out.ambient = ambient;
  out.basis = column_space(spanning, tol);
  out.basis = canonical_basis(out.basis);
  return out;
}

double invariance_defect(const SubspaceRep& s) {
  const Truncation& t = s.ambient;
  if (s.dim() == 0 || t.N == 0) return 0.0;
  Mat low = lower_part(s);
  double defect = 0.0;
  for (int k = 1; k <= t.d; ++k) {
    Mat shifted = right_shift_matrix(k, t).matrix * low;
    Mat resid = shifted - s.basis * (s.basis.adjoint() * shifted);
    defect = std::max(defect, max_column_norm(resid));
  }
  return defect;
}

double coinvariance_defect(const SubspaceRep& s) {
  const Truncation& t = s.ambient;
  if (s.dim() == 0 || t.N == 0) return 0.0;
  double defect = 0.0;
  for (int k = 1; k <= t.d; ++k) {
    Mat r = right_shift_matrix(k, t).matrix;
    Mat back = embed_rows(r.adjoint() * s.basis, Truncation{t.d, t.N - 1, t.r}, t);
    Mat resid = back - s.basis * (s.basis.adjoint() * back);
    defect = std::max(defect, max_column_norm(resid));
  }
  return defect;
}

Verdict is_left_multiplier(const Mat& m, const Truncation& dom, const Truncation& cod, double tol) {
  if (m.rows() != cod.dim() || m.cols() != dom.dim()) throw ShapeMismatch("matrix does not match windows");
  if (dom.d != cod.d) throw ShapeMismatch("windows use different letter counts");
  Verdict v{true, 0.0};
  if (dom.N == 0) return v;
  Truncation inner{dom.d, dom.N - 1, dom.r};
  Truncation wider{cod.d, cod.N + 1, cod.r};
  for (int k = 1; k <= dom.d; ++k) {
    Mat lhs = embed_rows(m * right_shift_matrix(k, dom).matrix, cod, wider);
    Mat rhs = right_shift_matrix(k, wider).matrix * m.leftCols(inner.dim());
    v.defect = std::max(v.defect, spectral_norm(lhs - rhs));
  }
  v.ok = v.defect <= tol;
  return v;
}

Verdict is_left_multiplier(const MultMatrix& m, double tol) {
  return is_left_multiplier(m.matrix, m.dom, m.cod, tol);
}

SubspaceRep kernel_on_window(const MultMatrix& f, double tol) {
  SubspaceRep out;
  out.ambient = f.dom;
  out.basis = null_space(f.matrix, tol);
  out.basis = canonical_basis(out.basis);
  return out;
}

ConstantKernelSplit constant_kernel_split(const MatPoly& f, int n_dom, double tol) {
  ConstantKernelSplit out;
  Mat stacked(0, f.cols());
  for (const auto& [w, c] : f.terms()) {
    Mat next(stacked.rows() + c.rows(), f.cols());
    next << stacked, c;
    stacked = next;
  }
  out.coefficient_basis = stacked.rows() == 0 ? Mat(Mat::Identity(f.cols(), f.cols()))
                                              : null_space(stacked, tol);
  out.coefficient_basis = canonical_basis(out.coefficient_basis);
  out.window_kernel_dim = kernel_on_window(multiplier_matrix(f, n_dom), tol).dim();
  Eigen::Index expected = static_cast<Eigen::Index>(word_count(f.d(), n_dom)) *
                          out.coefficient_basis.cols();
  out.reducing = out.window_kernel_dim == expected;
  return out;
}

Verdict is_inner(const MultMatrix& f, double tol) {
  Eigen::Index n = f.matrix.cols();
  Verdict v;
  v.defect = spectral_norm(f.matrix.adjoint() * f.matrix - Mat::Identity(n, n));
  v.ok = v.defect <= tol;
  return v;
}

Verdict range_contains(const Mat& f, const Mat& g, double tol) {
  if (f.rows() != g.rows()) throw ShapeMismatch("range comparison needs a shared codomain");
  Verdict v;
  double scale = std::max(spectral_norm(f), spectral_norm(g));
  double rank_tol = static_cast<double>(std::max(g.rows(), g.cols())) * kEps * spectral_norm(g);
  double t = tol >= 0.0 ? tol
                        : static_cast<double>(std::max({f.rows(), f.cols(), g.cols()})) * kEps * scale;
  Mat q = column_space(g, rank_tol);
  Mat resid = f - q * (q.adjoint() * f);
  v.defect = max_column_norm(resid);
  v.ok = v.defect <= t;
  return v;
}

Verdict range_contains(const MultMatrix& f, const MultMatrix& g, double tol) {
  if (!(f.cod == g.cod)) throw ShapeMismatch("range comparison needs a shared codomain window");
  return range_contains(f.matrix, g.matrix, tol);
}

Verdict range_contains(const MatPoly& f, const MatPoly& g, int n, double tol) {
  return range_contains(window_operator(f, n).op, window_operator(g, n).op, tol);
}

DouglasResult douglas_factor(const MatPoly& f, const MatPoly& g, int n, double tol) {
  if (f.d() != g.d()) throw ShapeMismatch("symbols use different letter counts");
  if (f.rows() != g.rows()) throw ShapeMismatch("symbols have different output spaces");
  if (f.degree() > n) throw WindowOverflow("window degree below the degree of F");
  DouglasResult out;
  out.factor = MatPoly(f.d(), g.cols(), f.cols());
  if (f.is_zero()) return out;

  WindowOperator wg = window_operator(g, n);
  WindowOperator wf = window_operator(f, n);
  Truncation cod{f.d(), n, f.rows()};
  Mat targets = symbol_columns(f, cod);
  double scale = std::max({1.0, spectral_norm(wg.op), spectral_norm(targets)});
  double t = tol >= 0.0 ? tol
                        : static_cast<double>(std::max(wg.op.rows(), wg.op.cols())) * kEps * scale;
  Mat pinv = pseudo_inverse(wg.op, t);
  Mat coords = pinv * targets;
  out.window_residual = max_column_norm(wg.op * coords - targets);
  if (out.window_residual > t) {
    throw NoFactorization("range of F is not contained in range of G on the window",
                          out.window_residual);
  }
  Mat x = wg.domain * coords;
  double clean = 64.0 * kEps * std::max(1.0, x.cwiseAbs().maxCoeff());
  out.factor = columns_to_symbol(x, wg.dom).cleaned(clean);
  out.residual = symbol_distance(nc_mul(g, out.factor), f);
  out.sigma = spectral_norm(pinv * wf.op);
  int h_deg = out.factor.window_degree();
  if (h_deg <= n) out.symbol_norm = spectral_norm(multiplier_matrix(out.factor, n - h_deg).matrix);
  return out;
}

double douglas_floor(const MatPoly& f, const MatPoly& g, int n, double lambda) {
  Mat fo = window_operator(f, n).op;
  Mat go = window_operator(g, n).op;
  return min_hermitian_eigenvalue(lambda * lambda * go * go.adjoint() - fo * fo.adjoint());
}

}  // namespace ncfock
