#include "ncfock/rkhs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ncfock/errors.hpp"

namespace ncfock {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_strict(const RowTuple& z, const char* name) {
  if (!(z.row_norm() < 1.0)) throw DomainError(std::string(name) + " is not a strict row contraction");
}

double geometric_tail(double ab, int n) {
  return std::pow(ab, n + 1) / (1.0 - ab);
}

Mat hermitian_part(const Mat& a) { return (a + a.adjoint()) / 2.0; }

Mat solve_lower(const Mat& l, const Mat& rhs) {
  return l.triangularView<Eigen::Lower>().solve(rhs);
}

Mat cholesky_lower(const Mat& g) {
  Eigen::LLT<Mat> llt(hermitian_part(g));
  if (llt.info() != Eigen::Success) throw DomainError("range gram is not positive definite");
  return llt.matrixL();
}

double min_eig_or_zero(const Mat& a) {
  return a.rows() == 0 ? 0.0 : min_hermitian_eigenvalue(hermitian_part(a));
}

}  // namespace

int szego_cutoff(double a, double b, double p_norm, double target) {
  double ab = a * b;
  if (p_norm == 0.0 || ab == 0.0) return 0;
  int n = 0;
  while (p_norm * geometric_tail(ab, n) >= target && n < 100000) ++n;
  return n;
}

SzegoValue szego_eval(const RowTuple& z, const RowTuple& w, const Mat& p, int n) {
  if (z.d != w.d) throw ShapeMismatch("points use different letter counts");
  if (p.rows() != z.n || p.cols() != w.n) throw ShapeMismatch("P does not match the point sizes");
  require_strict(z, "Z");
  require_strict(w, "W");
  SzegoValue out;
  out.cutoff = n;
  Mat level = p;
  out.value = p;
  for (int k = 1; k <= n; ++k) {
    Mat next = Mat::Zero(p.rows(), p.cols());
    for (int j = 0; j < z.d; ++j) next += z.entries[j] * level * w.entries[j].adjoint();
    level = std::move(next);
    out.value += level;
  }
  out.tail_bound = spectral_norm(p) * geometric_tail(z.row_norm() * w.row_norm(), n);
  return out;
}

SzegoValue szego_eval(const RowTuple& z, const RowTuple& w, const Mat& p) {
  require_strict(z, "Z");
  require_strict(w, "W");
  return szego_eval(z, w, p, szego_cutoff(z.row_norm(), w.row_norm(), spectral_norm(p)));
}

Vec kernel_vector(const RowTuple& z, const Vec& y, const Vec& v, const Truncation& t) {
  require_strict(z, "Z");
  const Eigen::Index n = z.n;
  if (v.size() != n || y.size() != n * t.r) throw ShapeMismatch("kernel vector data has wrong size");
  if (z.d != t.d) throw ShapeMismatch("point and window use different letter counts");
  Vec out = Vec::Zero(t.dim());
  for (const Word& alpha : words_up_to(t.d, t.N)) {
    Vec u = z.power(alpha) * v;
    for (Eigen::Index j = 0; j < t.r; ++j) {
      cplx s = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) s += std::conj(y(i * t.r + j)) * u(i);
      out(t.index(alpha, j)) = std::conj(s);
    }
  }
  return out;
}

SzegoValue range_kernel_eval(const MatPoly& f, const RowTuple& z, const RowTuple& w, const Mat& p,
                             int n) {
  SzegoValue k = szego_eval(z, w, p, n);
  Mat fz = eval_at_point(f, z);
  Mat fw = eval_at_point(f, w);
  Mat inner = kron(k.value, Mat::Identity(f.cols(), f.cols()));
  k.value = fz * inner * fw.adjoint();
  k.tail_bound *= spectral_norm(fz) * spectral_norm(fw);
  return k;
}

KernelFn szego_kernel(int n) {
  return [n](const RowTuple& z, const RowTuple& w, const Mat& p) { return szego_eval(z, w, p, n).value; };
}

KernelFn range_kernel(const MatPoly& f, int n) {
  return [f, n](const RowTuple& z, const RowTuple& w, const Mat& p) {
    return range_kernel_eval(f, z, w, p, n).value;
  };
}

KernelFn kernel_join(KernelFn k1, KernelFn k2) {
  return [k1 = std::move(k1), k2 = std::move(k2)](const RowTuple& z, const RowTuple& w, const Mat& p) {
    return Mat(k1(z, w, p) + k2(z, w, p));
  };
}

Mat kernel_gram(const KernelFn& k, const std::vector<KernelSample>& samples) {
  const auto m = static_cast<Eigen::Index>(samples.size());
  Mat g(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const KernelSample& a = samples[i];
      const KernelSample& b = samples[j];
      Mat value = k(a.point, b.point, a.v * b.v.adjoint());
      g(i, j) = a.y.dot(value * b.y);
    }
  }
  return g;
}

double RangeSpace::norm2(const Vec& h) const {
  Vec c = basis.adjoint() * h;
  return c.dot(gram * c).real();
}

Mat RangeSpace::kernel_operator() const {
  if (dim() == 0) return Mat::Zero(ambient.dim(), ambient.dim());
  Mat l = cholesky_lower(gram);
  Mat half = solve_lower(l, basis.adjoint());
  return half.adjoint() * half;
}

RangeSpace range_space_of(const Mat& a, const Truncation& ambient, double tol) {
  if (a.rows() != ambient.dim()) throw ShapeMismatch("operator does not map into the ambient window");
  RangeSpace out;
  out.ambient = ambient;
  out.basis = column_space(a, tol);
  out.basis = canonical_basis(out.basis);
  Mat pre = pseudo_inverse(a, tol) * out.basis;
  out.gram = hermitian_part(pre.adjoint() * pre);
  return out;
}

RangeSpace build_range_space(const MatPoly& f, int n, double tol) {
  WindowOperator w = window_operator(f, n);
  RangeSpace out = range_space_of(w.op, w.cod, tol);
  out.op = std::move(w);
  return out;
}

RangeSpace meet_norm_gram(const RangeSpace& m1, const RangeSpace& m2, double tol) {
  if (!(m1.ambient == m2.ambient)) throw ShapeMismatch("range spaces live in different windows");
  RangeSpace out;
  out.ambient = m1.ambient;
  out.basis = intersect_spans(m1.basis, m2.basis, tol);
  out.basis = canonical_basis(out.basis);
  Mat t1 = m1.basis.adjoint() * out.basis;
  Mat t2 = m2.basis.adjoint() * out.basis;
  out.gram = hermitian_part(t1.adjoint() * m1.gram * t1 + t2.adjoint() * m2.gram * t2);
  return out;
}

DirectSumSplit decompose_direct_sum(const RangeSpace& m1, const RangeSpace& m2, double tol) {
  if (!(m1.ambient == m2.ambient)) throw ShapeMismatch("range spaces live in different windows");
  const Eigen::Index d1 = m1.dim();
  const Eigen::Index d2 = m2.dim();
  DirectSumSplit out;
  out.metric_root = Mat::Zero(d1 + d2, d1 + d2);
  Mat l1 = d1 > 0 ? cholesky_lower(m1.gram) : Mat(0, 0);
  Mat l2 = d2 > 0 ? cholesky_lower(m2.gram) : Mat(0, 0);
  out.metric_root.topLeftCorner(d1, d1) = l1.adjoint();
  out.metric_root.bottomRightCorner(d2, d2) = l2.adjoint();

  Mat inter = intersect_spans(m1.basis, m2.basis, tol);
  Mat anti(d1 + d2, inter.cols());
  anti << m1.basis.adjoint() * inter, -(m2.basis.adjoint() * inter);
  out.meet_part = column_space(out.metric_root * anti);
  out.join_part = out.meet_part.cols() == 0 ? Mat(Mat::Identity(d1 + d2, d1 + d2))
                                            : null_space(out.meet_part.adjoint());
  out.meet_part = canonical_basis(out.meet_part);
  out.join_part = canonical_basis(out.join_part);
  out.orthogonality = (out.meet_part.cols() == 0 || out.join_part.cols() == 0)
                          ? 0.0
                          : spectral_norm(out.meet_part.adjoint() * out.join_part);

  // Kernel samples K1 x (+) K2 x in isometric coordinates: L_i^{-1} B_i^* x.
  Mat samples(d1 + d2, m1.ambient.dim());
  if (d1 > 0) samples.topRows(d1) = solve_lower(l1, m1.basis.adjoint());
  if (d2 > 0) samples.bottomRows(d2) = solve_lower(l2, m2.basis.adjoint());
  Mat span = column_space(samples);
  out.span_residual = subspace_distance(span, out.join_part);
  return out;
}

SumNormIdentity sum_norm_identity(const RangeSpace& m1, const RangeSpace& m2,
                                  const RangeSpace& joined, const Vec& x) {
  SumNormIdentity out;
  out.direct = m1.norm2(m1.kernel_operator() * x) + m2.norm2(m2.kernel_operator() * x);
  Vec image = joined.op ? Vec(joined.op->op * (joined.op->op.adjoint() * x))
                        : Vec(joined.kernel_operator() * x);
  out.joined = joined.norm2(image);
  return out;
}

RangeSpace complementary_space(const MultMatrix& t, double tol) {
  if (t.matrix.rows() != t.cod.dim()) throw ShapeMismatch("operator does not match its window");
  double norm = spectral_norm(t.matrix);
  if (norm > 1.0 + tol) throw NotContractive("operator norm exceeds one");
  const Eigen::Index n = t.matrix.rows();
  Mat defect = hermitian_part(Mat::Identity(n, n) - t.matrix * t.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(defect);
  const RVec& lambda = es.eigenvalues();
  double cutoff = 64.0 * static_cast<double>(n) * kEps;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    if (lambda(i) > cutoff) keep.push_back(i);
  }
  RangeSpace out;
  out.ambient = t.cod;
  out.basis = Mat(n, static_cast<Eigen::Index>(keep.size()));
  RVec inv(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.basis.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
    inv(static_cast<Eigen::Index>(k)) = 1.0 / lambda(keep[k]);
  }
  // Rotating an orthonormal eigenbasis changes gram by the same rotation.
  Mat before = out.basis;
  out.basis = canonical_basis(out.basis);
  Mat rot = before.adjoint() * out.basis;
  out.gram = hermitian_part(rot.adjoint() * inv.cast<cplx>().asDiagonal() * rot);
  return out;
}

SupValue complement_norm_sup(const RangeSpace& m, const Vec& h, double tol) {
  SupValue out;
  out.value = h.squaredNorm();
  if (m.dim() == 0) return out;
  Vec b = m.basis.adjoint() * h;
  Mat excess = hermitian_part(m.gram - Mat::Identity(m.dim(), m.dim()));
  Eigen::SelfAdjointEigenSolver<Mat> es(excess);
  Vec coords = es.eigenvectors().adjoint() * b;
  for (Eigen::Index i = 0; i < coords.size(); ++i) {
    double mu = es.eigenvalues()(i);
    double weight = std::norm(coords(i));
    if (mu > tol) {
      out.value += weight / mu;
    } else if (std::sqrt(weight) > tol) {
      out.finite = false;
      out.value = std::numeric_limits<double>::infinity();
      return out;
    }
  }
  return out;
}

Containment contractive_containment(const RangeSpace& a, const RangeSpace& b) {
  if (!(a.ambient == b.ambient)) throw ShapeMismatch("range spaces live in different windows");
  Containment out;
  if (a.dim() == 0) return out;
  Mat t = b.basis.adjoint() * a.basis;
  Mat resid = a.basis - b.basis * t;
  for (Eigen::Index j = 0; j < resid.cols(); ++j) out.span_residual = std::max(out.span_residual, resid.col(j).norm());
  out.margin = min_eig_or_zero(a.gram - t.adjoint() * b.gram * t);
  return out;
}

Verdict difference_quotient_check(const RangeSpace& h, double tol) {
  const Truncation& t = h.ambient;
  SubspaceRep s = h.subspace();
  double coinv = coinvariance_defect(s);
  if (coinv > tol) throw DomainError("space is not coinvariant under the right shifts");
  Verdict v{true, 0.0};
  if (h.dim() == 0) return v;
  Mat vac = h.basis.topRows(t.r);
  Mat q = h.gram - vac.adjoint() * vac;
  if (t.N > 0) {
    Truncation lower{t.d, t.N - 1, t.r};
    for (int k = 1; k <= t.d; ++k) {
      Mat back = embed_rows(right_shift_matrix(k, t).matrix.adjoint() * h.basis, lower, t);
      Mat rk = h.basis.adjoint() * back;
      q -= rk.adjoint() * h.gram * rk;
    }
  }
  Mat l = cholesky_lower(h.gram);
  Mat scaled = solve_lower(l, solve_lower(l, hermitian_part(q)).adjoint());
  v.defect = min_eig_or_zero(scaled);
  v.ok = v.defect >= -tol;
  return v;
}

}  // namespace ncfock
