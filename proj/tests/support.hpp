#pragma once

#include <random>

#include "ncfock/ncpoly.hpp"
#include "ncfock/words.hpp"

namespace ncfock::testing {

inline Mat random_mat(std::mt19937& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g;
  Mat c(rows, cols);
  for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = cplx(g(rng), g(rng));
  return c;
}

inline Mat random_unitary(std::mt19937& rng, Eigen::Index n) {
  Eigen::HouseholderQR<Mat> qr(random_mat(rng, n, n));
  return qr.householderQ() * Mat::Identity(n, n);
}

inline MatPoly random_poly(std::mt19937& rng, int d, int deg, Eigen::Index rows, Eigen::Index cols) {
  MatPoly p(d, rows, cols);
  for (const Word& w : words_up_to(d, deg)) p.add_term(w, random_mat(rng, rows, cols));
  return p;
}

inline MatPoly scalar_poly(int d, const Word& w, cplx c = 1.0) {
  return MatPoly::monomial(d, w, Mat::Constant(1, 1, c));
}

}  // namespace ncfock::testing
