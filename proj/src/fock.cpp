#include "ncfock/fock.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <fstream>
#include <sstream>

#include "ncfock/errors.hpp"

namespace ncfock {

Eigen::Index Truncation::dim() const {
  return r * static_cast<Eigen::Index>(word_count(d, N));
}

Eigen::Index Truncation::index(const Word& alpha, Eigen::Index j) const {
  if (static_cast<int>(alpha.size()) > N) throw WindowOverflow("word longer than window");
  return r * static_cast<Eigen::Index>(rank_word(alpha, d)) + j;
}

Eigen::Index Truncation::block_start(int k) const {
  return r * static_cast<Eigen::Index>(word_count(d, k - 1));
}

namespace {

void check_letter(int k, int d) {
  if (k < 1 || k > d) throw InvalidWord("shift index outside [1, d]");
}

MultMatrix shift_matrix(int k, const Truncation& t, bool exact, bool left) {
  check_letter(k, t.d);
  MultMatrix out;
  out.symbol = MatPoly::monomial(t.d, Word{k}, Mat::Identity(t.r, t.r));
  out.cod = t;
  out.dom = t;
  if (exact) out.dom.N = t.N - 1;
  out.exact = exact;
  out.matrix = Mat::Zero(out.cod.dim(), out.dom.dim());
  std::size_t count = word_count(t.d, t.N - 1);
  for (std::size_t i = 0; i < count; ++i) {
    Word alpha = unrank_word(i, t.d);
    Word image = left ? concat_words(Word{k}, alpha) : concat_words(alpha, Word{k});
    for (Eigen::Index j = 0; j < t.r; ++j) {
      out.matrix(t.index(image, j), out.dom.index(alpha, j)) = 1.0;
    }
  }
  return out;
}

}  // namespace

MultMatrix left_shift_matrix(int k, const Truncation& t, bool exact) {
  return shift_matrix(k, t, exact, true);
}

MultMatrix right_shift_matrix(int k, const Truncation& t, bool exact) {
  MultMatrix out = shift_matrix(k, t, exact, false);
  return out;
}

Mat transpose_unitary_matrix(const Truncation& t) {
  Mat u = Mat::Zero(t.dim(), t.dim());
  std::size_t count = word_count(t.d, t.N);
  for (std::size_t i = 0; i < count; ++i) {
    Word alpha = unrank_word(i, t.d);
    Word rev = reverse_word(alpha);
    for (Eigen::Index j = 0; j < t.r; ++j) u(t.index(rev, j), t.index(alpha, j)) = 1.0;
  }
  return u;
}

MultMatrix multiplier_window(const MatPoly& f, int n_dom, int n_cod) {
  MultMatrix out;
  out.symbol = f;
  out.dom = Truncation{f.d(), n_dom, f.cols()};
  out.cod = Truncation{f.d(), n_cod, f.rows()};
  out.exact = n_cod >= n_dom + f.window_degree();
  out.matrix = Mat::Zero(out.cod.dim(), out.dom.dim());
  std::size_t count = word_count(f.d(), n_dom);
  for (const auto& [alpha, c] : f.terms()) {
    for (std::size_t i = 0; i < count; ++i) {
      Word beta = unrank_word(i, f.d());
      if (static_cast<int>(alpha.size() + beta.size()) > n_cod) continue;
      Eigen::Index row = out.cod.index(concat_words(alpha, beta), 0);
      Eigen::Index col = out.dom.index(beta, 0);
      out.matrix.block(row, col, f.rows(), f.cols()) += c;
    }
  }
  return out;
}

MultMatrix multiplier_matrix(const MatPoly& f, int n_dom) {
  return multiplier_window(f, n_dom, n_dom + f.window_degree());
}

MultMatrix window_compression(const MatPoly& f, int n) { return multiplier_window(f, n, n); }

WindowOperator window_operator(const MatPoly& f, int n) {
  WindowOperator out;
  out.symbol = f;
  MultMatrix full = multiplier_matrix(f, n);
  out.dom = full.dom;
  out.cod = Truncation{f.d(), n, f.rows()};
  Eigen::Index low = out.cod.dim();
  Eigen::Index high = full.cod.dim() - low;
  if (high == 0) {
    out.domain = Mat::Identity(out.dom.dim(), out.dom.dim());
  } else {
    Mat overflow = full.matrix.bottomRows(high);
    double scale = std::max(1.0, spectral_norm(overflow));
    out.domain = null_space(overflow, 64.0 * std::numeric_limits<double>::epsilon() *
                                          static_cast<double>(overflow.cols()) * scale);
  }
  out.op = full.matrix.topRows(low) * out.domain;
  return out;
}

Vec poly_to_vec(const MatPoly& p, const Truncation& t) {
  if (p.cols() != 1 || p.rows() != t.r) throw ShapeMismatch("vector symbol shape");
  if (p.degree() > t.N) throw WindowOverflow("polynomial degree exceeds window");
  Vec v = Vec::Zero(t.dim());
  for (const auto& [w, c] : p.terms()) v.segment(t.index(w, 0), t.r) = c.col(0);
  return v;
}

MatPoly vec_to_poly(const Vec& v, const Truncation& t) {
  if (v.size() != t.dim()) throw ShapeMismatch("vector length does not match window");
  MatPoly p(t.d, t.r, 1);
  std::size_t count = word_count(t.d, t.N);
  for (std::size_t i = 0; i < count; ++i) {
    Eigen::Index start = t.r * static_cast<Eigen::Index>(i);
    p.add_term(unrank_word(i, t.d), v.segment(start, t.r));
  }
  return p;
}

Mat symbol_columns(const MatPoly& f, const Truncation& cod) {
  Mat out(cod.dim(), f.cols());
  for (Eigen::Index j = 0; j < f.cols(); ++j) out.col(j) = poly_to_vec(f.column(j), cod);
  return out;
}

MatPoly columns_to_symbol(const Mat& cols, const Truncation& cod) {
  MatPoly out(cod.d, cod.r, cols.cols());
  std::size_t count = word_count(cod.d, cod.N);
  for (std::size_t i = 0; i < count; ++i) {
    Eigen::Index start = cod.r * static_cast<Eigen::Index>(i);
    out.add_term(unrank_word(i, cod.d), cols.middleRows(start, cod.r));
  }
  return out;
}

Mat embed_rows(const Mat& m, const Truncation& from, const Truncation& to) {
  if (from.d != to.d || from.r != to.r || from.N > to.N) throw ShapeMismatch("window embedding");
  Mat out = Mat::Zero(to.dim(), m.cols());
  out.topRows(from.dim()) = m;
  return out;
}

Mat truncate_rows(const Mat& m, const Truncation& from, const Truncation& to) {
  if (from.d != to.d || from.r != to.r || from.N < to.N) throw ShapeMismatch("window truncation");
  return m.topRows(to.dim());
}

void write_matrix_csv(std::ostream& os, const Mat& m) {
  os << m.rows() << "," << m.cols() << "\n";
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ",";
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g", m(i, j).real(), m(i, j).imag());
      os << buf;
    }
    os << "\n";
  }
}

Mat read_matrix_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("empty matrix CSV", 0);
  long rows = 0;
  long cols = 0;
  if (std::sscanf(line.c_str(), "%ld,%ld", &rows, &cols) != 2 || rows < 0 || cols < 0) {
    throw ParseError("matrix CSV header must be rows,cols", 0);
  }
  Mat m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    if (!std::getline(is, line)) throw ParseError("matrix CSV has too few rows", static_cast<std::size_t>(i + 1));
    std::stringstream ss(line);
    std::string field;
    std::vector<double> values;
    while (std::getline(ss, field, ',')) {
      try {
        values.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw ParseError("bad number '" + field + "' in matrix CSV", static_cast<std::size_t>(i + 1));
      }
    }
    if (static_cast<long>(values.size()) != 2 * cols) {
      throw ParseError("matrix CSV row has wrong width", static_cast<std::size_t>(i + 1));
    }
    for (long j = 0; j < cols; ++j) {
      m(i, j) = cplx(values[static_cast<std::size_t>(2 * j)], values[static_cast<std::size_t>(2 * j + 1)]);
    }
  }
  return m;
}

Mat read_matrix_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  return read_matrix_csv(in);
}

void write_matrix_csv_file(const std::string& path, const Mat& m) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write " + path);
  write_matrix_csv(out, m);
}

}  // namespace ncfock
