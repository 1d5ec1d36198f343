#include "ncfock/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ncfock/errors.hpp"
#include "ncfock/rkhs.hpp"

namespace ncfock {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Mat hermitian_part(const Mat& a) { return (a + a.adjoint()) / 2.0; }

Mat row_gram(const RowTuple& x) {
  Mat s = Mat::Zero(x.n, x.n);
  for (const Mat& e : x.entries) s += e * e.adjoint();
  return s;
}

// Phi(A) = sum_k X_k A X_k^*.
Mat completely_positive_step(const RowTuple& x, const Mat& a) {
  Mat out = Mat::Zero(x.n, x.n);
  for (const Mat& e : x.entries) out += e * a * e.adjoint();
  return out;
}

Mat unit_defect_square(const RowTuple& x) {
  return hermitian_part(Mat::Identity(x.n, x.n) - row_gram(x));
}

double eigen_cutoff(Eigen::Index n) { return 64.0 * static_cast<double>(std::max<Eigen::Index>(n, 1)) * kEps; }

Mat eigen_factor(const Mat& square, double cutoff) {
  Eigen::SelfAdjointEigenSolver<Mat> es(square);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < square.rows(); ++i) {
    if (es.eigenvalues()(i) > cutoff) keep.push_back(i);
  }
  Mat out(static_cast<Eigen::Index>(keep.size()), square.cols());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.row(static_cast<Eigen::Index>(k)) =
        std::sqrt(es.eigenvalues()(keep[k])) * es.eigenvectors().col(keep[k]).adjoint();
  }
  Mat cols = out.adjoint();
  canonical_phase(cols, 1e-12);
  return cols.adjoint();
}

Eigen::Index factor_rank(const Mat& square, double cutoff) {
  Eigen::SelfAdjointEigenSolver<Mat> es(square, Eigen::EigenvaluesOnly);
  return static_cast<Eigen::Index>((es.eigenvalues().array() > cutoff).count());
}

Mat qr_factor(const Mat& square, double cutoff) {
  Eigen::Index p = factor_rank(square, cutoff);
  Mat root = psd_sqrt(square).root;
  Eigen::ColPivHouseholderQR<Mat> qr(root);
  Mat r = qr.matrixR().triangularView<Eigen::Upper>();
  Mat rp = r * qr.colsPermutation().transpose();
  return rp.topRows(p);
}

Mat lower_span(const SubspaceRep& s, double tol) {
  const Truncation& t = s.ambient;
  Eigen::Index low = Truncation{t.d, t.N - 1, t.r}.dim();
  Mat top = s.basis.bottomRows(t.dim() - low);
  return s.basis * null_space(top, tol);
}

double max_col_norm(const Mat& m) {
  double out = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) out = std::max(out, m.col(j).norm());
  return out;
}

// (R_k^* (x) I) m for m with rows indexed by the window t: block beta is block beta k.
Mat right_shift_adjoint(const Mat& m, const Truncation& t, int letter) {
  Truncation lower{t.d, t.N - 1, t.r};
  Mat out(lower.dim(), m.cols());
  for (const Word& beta : words_up_to(t.d, lower.N)) {
    out.middleRows(lower.index(beta, 0), t.r) = m.middleRows(t.index(concat_words(beta, {letter}), 0), t.r);
  }
  return out;
}

// (I (x) w) m, applying w to every word block of r rows.
Mat coefficient_lift(const Mat& m, const Mat& w) {
  const Eigen::Index r = w.cols();
  Mat out(m.rows() / r * w.rows(), m.cols());
  for (Eigen::Index b = 0; b < m.rows() / r; ++b) out.middleRows(b * w.rows(), w.rows()) = w * m.middleRows(b * r, r);
  return out;
}

}  // namespace

double NormedSubspace::embedding_norm() const {
  if (gram.rows() == 0) return 0.0;
  return 1.0 / std::sqrt(min_hermitian_eigenvalue(hermitian_part(gram)));
}

Verdict is_row_contraction(const RowTuple& x, double tol) {
  Verdict v;
  v.defect = x.row_norm();
  v.ok = v.defect * v.defect <= 1.0 + tol;
  return v;
}

std::vector<double> purity_index(const RowTuple& x, int n_max) {
  std::vector<double> out;
  Mat level = Mat::Identity(x.n, x.n);
  for (int n = 0; n <= n_max; ++n) {
    out.push_back(std::sqrt(spectral_norm(level)));
    level = completely_positive_step(x, level);
  }
  return out;
}

Mat defect_operator(const RowTuple& x, double tol) {
  Mat square = unit_defect_square(x);
  if (min_hermitian_eigenvalue(square) < -tol) throw NotContractive("row norm exceeds one");
  return psd_sqrt(square).root;
}

PoissonKernel poisson_kernel(const RowTuple& x, int n, double tol, DefectFactor factor, double rank_tol) {
  Mat square = unit_defect_square(x);
  if (min_hermitian_eigenvalue(square) < -tol) throw NotContractive("row norm exceeds one");
  PoissonKernel out;
  const double cutoff = rank_tol < 0.0 ? eigen_cutoff(square.rows()) : rank_tol;
  out.defect_factor = factor == DefectFactor::Eigen ? eigen_factor(square, cutoff) : qr_factor(square, cutoff);
  const Eigen::Index p = out.defect_factor.rows();
  out.window = Truncation{x.d, n, p};

  Mat level = Mat::Identity(x.n, x.n);
  for (int k = 0; k <= n; ++k) level = completely_positive_step(x, level);
  out.purity_residual = spectral_norm(level);
  if (out.purity_residual > tol) throw ImpureError("row contraction is not pure on the window", out.purity_residual);

  std::vector<Word> words = words_up_to(x.d, n);
  std::vector<Mat> tails(words.size());
  out.kernel = Mat(out.window.dim(), x.n);
  for (std::size_t i = 0; i < words.size(); ++i) {
    const Word& alpha = words[i];
    if (alpha.empty()) {
      tails[i] = Mat::Identity(x.n, x.n);
    } else {
      Word prefix(alpha.begin(), alpha.end() - 1);
      tails[i] = tails[rank_word(prefix, x.d)] * x.entries[alpha.back() - 1].adjoint();
    }
    out.kernel.middleRows(out.window.index(alpha, 0), p) = out.defect_factor * tails[i];
  }

  out.isometry_defect = spectral_norm(out.kernel.adjoint() * out.kernel - Mat::Identity(x.n, x.n));
  if (n > 0) {
    Truncation lower{x.d, n - 1, p};
    for (int k = 1; k <= x.d; ++k) {
      Mat lhs = right_shift_adjoint(out.kernel, out.window, k);
      Mat rhs = truncate_rows(out.kernel * x.entries[k - 1].adjoint(), out.window, lower);
      out.intertwining_defect = std::max(out.intertwining_defect, spectral_norm(lhs - rhs));
    }
  }
  return out;
}

DilationEquivalence compare_dilations(const PoissonKernel& a, const PoissonKernel& b) {
  if (a.window.d != b.window.d || a.window.N != b.window.N) throw ShapeMismatch("dilations use different windows");
  DilationEquivalence out;
  out.unitary = b.defect_factor * pseudo_inverse(a.defect_factor);
  const Eigen::Index pa = a.window.r, pb = b.window.r;
  if (pa != pb) {
    out.unitary_defect = std::numeric_limits<double>::infinity();
    return out;
  }
  out.unitary_defect = spectral_norm(out.unitary.adjoint() * out.unitary - Mat::Identity(pa, pa)) +
                       spectral_norm(out.unitary * out.unitary.adjoint() - Mat::Identity(pa, pa));
  Mat lifted = coefficient_lift(a.kernel, out.unitary);
  out.embedding_defect = spectral_norm(lifted - b.kernel);
  for (int k = 1; a.window.N > 0 && k <= a.window.d; ++k) {
    Mat lhs = right_shift_adjoint(b.kernel, b.window, k);
    Mat rhs = coefficient_lift(right_shift_adjoint(a.kernel, a.window, k), out.unitary);
    out.intertwining_defect = std::max(out.intertwining_defect, spectral_norm(lhs - rhs));
  }
  return out;
}

DbbResult dbb_multiplier(const NormedSubspace& m, double tol) {
  const SubspaceRep& space = m.space;
  const Truncation& amb = space.ambient;
  const Mat& basis = space.basis;
  const Eigen::Index dim = basis.cols();
  if (m.gram.rows() != dim || m.gram.cols() != dim) throw ShapeMismatch("gram does not match the basis");
  if (amb.N < 1) throw DomainError("window degree must be at least one");
  if (invariance_defect(space) > tol) throw DomainError("subspace is not invariant under the right shifts");
  DbbResult out;
  out.symbol = MatPoly(amb.d, amb.r, 0);
  if (dim == 0) return out;

  Truncation lower{amb.d, amb.N - 1, amb.r};
  Mat top = basis.bottomRows(amb.dim() - lower.dim());
  Mat inner = null_space(top, tol);  // coordinates of elements that stay in the window when shifted
  Mat gram = hermitian_part(m.gram);
  Mat s = inner.adjoint() * gram * inner;
  Eigen::LLT<Mat> chol(gram);
  if (chol.info() != Eigen::Success) throw DomainError("gram is not positive definite");
  Mat l = chol.matrixL();
  auto l_adj = l.adjoint().triangularView<Eigen::Upper>();

  std::vector<Mat> entries;
  for (int k = 1; k <= amb.d; ++k) {
    Mat shifted = right_shift_matrix(k, amb).matrix * basis.topRows(lower.dim()) * inner;
    Mat xk = basis.adjoint() * shifted;
    Mat adj = inner.cols() == 0 ? Mat(Mat::Zero(dim, dim))
                                : Mat(inner * s.ldlt().solve(xk.adjoint() * gram));
    // X_k^* in gram-orthonormal coordinates is L^* adj L^{-*}.
    Mat left = l.adjoint() * adj;
    Mat hat_adj = l.triangularView<Eigen::Lower>().solve(left.adjoint()).adjoint();
    entries.push_back(hat_adj.adjoint());
  }
  out.compression = RowTuple(entries);
  out.contraction = out.compression.row_norm();
  if (out.contraction > 1.0 + tol) throw NotContractive("compressed shifts are not a row contraction");

  PoissonKernel pk = poisson_kernel(out.compression, amb.N, tol, DefectFactor::Eigen, tol);
  out.isometry_defect = pk.isometry_defect;
  Mat cols = basis * l_adj.solve(pk.defect_factor.adjoint());
  canonical_phase(cols, 1e-12);
  double clean = tol * std::max(1.0, cols.size() ? cols.cwiseAbs().maxCoeff() : 0.0);
  out.symbol = columns_to_symbol(cols, amb).cleaned(clean);

  NormedSubspace copy = m;
  out.embedding_norm = copy.embedding_norm();
  RangeSpace recovered = build_range_space(out.symbol, amb.N);
  out.symbol_norm = spectral_norm(recovered.op->op);
  out.range_residual = subspace_distance(recovered.basis, basis);
  Mat t = basis.adjoint() * recovered.basis;
  out.gram_residual = spectral_norm(recovered.gram - t.adjoint() * gram * t);
  return out;
}

SubspaceRep wandering_basis(const SubspaceRep& k, double tol) {
  const Truncation& t = k.ambient;
  if (invariance_defect(k) > tol) throw DomainError("subspace is not invariant under the right shifts");
  SubspaceRep out{t, k.basis};
  if (k.dim() == 0 || t.N == 0) return out;
  Truncation lower{t.d, t.N - 1, t.r};
  Mat low = lower_span(k, tol).topRows(lower.dim());
  Mat shifts(t.dim(), low.cols() * t.d);
  for (int j = 1; j <= t.d; ++j) {
    shifts.middleCols((j - 1) * low.cols(), low.cols()) = right_shift_matrix(j, t).matrix * low;
  }
  if (shifts.cols() > 0) {
    Mat image = column_space(shifts);
    // Cosines between K and the shifted part are 1 on the shifted part and 0 on the rest.
    out.basis = k.basis * null_space(image.adjoint() * k.basis, 0.5);
  }
  out.basis = canonical_basis(out.basis);
  return out;
}

BeurlingResult beurling_inner(const SubspaceRep& k, double tol) {
  SubspaceRep w = wandering_basis(k, tol);
  const Truncation& t = k.ambient;
  BeurlingResult out;
  Eigen::Index low = t.N > 0 ? Truncation{t.d, t.N - 1, t.r}.dim() : 0;
  if (w.dim() > 0 && t.N > 0 && null_space(w.basis.bottomRows(t.dim() - low), tol).cols() < w.dim()) {
    throw WindowOverflow("wandering vectors reach the top degree; enlarge the window");
  }
  double clean = 64.0 * kEps;
  out.theta = columns_to_symbol(w.basis, t).cleaned(clean);
  if (w.dim() == 0) return out;
  int inner_n = t.N - out.theta.window_degree();
  MultMatrix mm = multiplier_matrix(out.theta, inner_n);
  out.isometry_defect = is_inner(mm).defect;
  Mat resid = mm.matrix - k.basis * (k.basis.adjoint() * mm.matrix);
  out.range_residual = max_col_norm(resid);
  Mat below = k.basis * null_space(k.basis.bottomRows(t.dim() - Truncation{t.d, inner_n, t.r}.dim()), tol);
  Mat range = column_space(mm.matrix);
  out.coverage_residual = below.cols() == 0 ? 0.0 : containment_residual(below, range);
  return out;
}

}  // namespace ncfock
