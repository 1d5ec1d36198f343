#include "ncfock/linalg.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

namespace ncfock {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Eigen::JacobiSVD<Mat> full_svd(const Mat& a) {
  return Eigen::JacobiSVD<Mat>(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

double resolve_tol(const Mat& a, const RVec& sv, double tol) {
  if (tol >= 0.0) return tol;
  double smax = sv.size() > 0 ? sv(0) : 0.0;
  return static_cast<double>(std::max(a.rows(), a.cols())) * kEps * smax;
}

}  // namespace

double default_rank_tol(const Mat& a) {
  if (a.size() == 0) return 0.0;
  return static_cast<double>(std::max(a.rows(), a.cols())) * kEps * spectral_norm(a);
}

double spectral_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

Mat column_space(const Mat& a, double tol) {
  if (a.size() == 0) return Mat(a.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU);
  const RVec& sv = svd.singularValues();
  double t = resolve_tol(a, sv, tol);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > t) ++rank;
  return svd.matrixU().leftCols(rank);
}

Mat null_space(const Mat& a, double tol) {
  if (a.cols() == 0) return Mat(0, 0);
  if (a.rows() == 0) return Mat::Identity(a.cols(), a.cols());
  auto svd = full_svd(a);
  const RVec& sv = svd.singularValues();
  double t = resolve_tol(a, sv, tol);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > t) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

Mat pseudo_inverse(const Mat& a, double tol) {
  if (a.size() == 0) return Mat::Zero(a.cols(), a.rows());
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec& sv = svd.singularValues();
  double t = resolve_tol(a, sv, tol);
  RVec inv = RVec::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > t) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

PsdRoot psd_sqrt(const Mat& a) {
  PsdRoot out;
  if (a.size() == 0) {
    out.root = a;
    return out;
  }
  Mat h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> eig(h);
  RVec ev = eig.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < 0.0) {
      out.clamped = std::max(out.clamped, -ev(i));
      ev(i) = 0.0;
    }
    ev(i) = std::sqrt(ev(i));
  }
  out.root = eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().adjoint();
  return out;
}

double min_hermitian_eigenvalue(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Mat h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

double containment_residual(const Mat& q1, const Mat& q2) {
  if (q1.cols() == 0) return 0.0;
  Mat r = q1;
  if (q2.cols() > 0) r -= q2 * (q2.adjoint() * q1);
  return spectral_norm(r);
}

double subspace_distance(const Mat& q1, const Mat& q2) {
  if (q1.cols() != q2.cols()) return 1.0;
  return std::max(containment_residual(q1, q2), containment_residual(q2, q1));
}

void canonical_phase(Mat& basis, double tol) {
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    for (Eigen::Index i = 0; i < basis.rows(); ++i) {
      double m = std::abs(basis(i, j));
      if (m > tol) {
        basis.col(j) *= std::conj(basis(i, j)) / m;
        basis(i, j) = cplx(m, 0.0);
        break;
      }
    }
  }
}

Mat canonical_basis(const Mat& q, double tol) {
  const Eigen::Index k = q.cols();
  if (k == 0) return q;
  Mat echelon = q.adjoint();
  Eigen::Index row = 0;
  for (Eigen::Index c = 0; c < echelon.cols() && row < k; ++c) {
    Eigen::Index best = row;
    echelon.col(c).segment(row, k - row).cwiseAbs().maxCoeff(&best);
    best += row;
    if (std::abs(echelon(best, c)) <= tol) continue;
    echelon.row(row).swap(echelon.row(best));
    echelon.row(row) /= echelon(row, c);
    for (Eigen::Index i = 0; i < k; ++i) {
      if (i != row) echelon.row(i) -= echelon(i, c) * echelon.row(row);
    }
    ++row;
  }
  // Gram-Schmidt of the echelon rows in order.
  Mat spanning = echelon.topRows(row).adjoint();
  Eigen::HouseholderQR<Mat> qr(spanning);
  Mat out = qr.householderQ() * Mat::Identity(q.rows(), row);
  Mat r = qr.matrixQR().topLeftCorner(row, row);
  for (Eigen::Index j = 0; j < row; ++j) {
    if (std::abs(r(j, j)) > 0.0) out.col(j) *= r(j, j) / std::abs(r(j, j));
  }
  canonical_phase(out, tol);
  return out;
}

Mat intersect_spans(const Mat& a, const Mat& b, double tol) {
  if (a.cols() == 0 || b.cols() == 0) return Mat(a.rows(), 0);
  Mat stacked(a.rows(), a.cols() + b.cols());
  stacked << a, -b;
  double t = tol >= 0.0 ? tol : 1e-8;
  Mat ns = null_space(stacked, t);
  if (ns.cols() == 0) return Mat(a.rows(), 0);
  return column_space(a * ns.topRows(a.cols()), t);
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace ncfock
