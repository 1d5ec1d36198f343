#include "ncfock/ncpoly.hpp"

#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "ncfock/errors.hpp"

namespace ncfock {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ShapeMismatch(what);
}

bool is_zero_matrix(const Mat& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (m.data()[i] != cplx(0.0, 0.0)) return false;
  }
  return true;
}

}  // namespace

MatPoly::MatPoly(int d, Eigen::Index rows, Eigen::Index cols)
    : d_(d), rows_(rows), cols_(cols) {
  if (d < 1) throw PreconditionError("letter count must be positive");
  if (rows < 0 || cols < 0) throw ShapeMismatch("negative coefficient dimension");
}

MatPoly MatPoly::constant(int d, const Mat& value) {
  MatPoly p(d, value.rows(), value.cols());
  p.add_term({}, value);
  return p;
}

MatPoly MatPoly::identity(int d, Eigen::Index size) {
  return constant(d, Mat::Identity(size, size));
}

MatPoly MatPoly::monomial(int d, const Word& alpha, const Mat& value) {
  rank_word(alpha, d);
  MatPoly p(d, value.rows(), value.cols());
  p.add_term(alpha, value);
  return p;
}

MatPoly MatPoly::variable(int d, int k) {
  return monomial(d, Word{k}, Mat::Ones(1, 1));
}

int MatPoly::degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(terms_.rbegin()->first.size());
}

Mat MatPoly::coeff(const Word& alpha) const {
  auto it = terms_.find(alpha);
  if (it == terms_.end()) return Mat::Zero(rows_, cols_);
  return it->second;
}

void MatPoly::add_term(const Word& alpha, const Mat& value) {
  require(value.rows() == rows_ && value.cols() == cols_, "coefficient shape mismatch");
  auto it = terms_.find(alpha);
  if (it == terms_.end()) {
    if (!is_zero_matrix(value)) terms_.emplace(alpha, value);
    return;
  }
  it->second += value;
  if (is_zero_matrix(it->second)) terms_.erase(it);
}

void MatPoly::set_coeff(const Word& alpha, const Mat& value) {
  require(value.rows() == rows_ && value.cols() == cols_, "coefficient shape mismatch");
  terms_.erase(alpha);
  if (!is_zero_matrix(value)) terms_.emplace(alpha, value);
}

MatPoly MatPoly::columns(Eigen::Index start, Eigen::Index count) const {
  require(start >= 0 && count >= 0 && start + count <= cols_, "column range");
  MatPoly out(d_, rows_, count);
  for (const auto& [w, c] : terms_) out.add_term(w, c.middleCols(start, count));
  return out;
}

MatPoly MatPoly::column(Eigen::Index j) const { return columns(j, 1); }

MatPoly MatPoly::top_rows(Eigen::Index count) const {
  require(count >= 0 && count <= rows_, "row range");
  MatPoly out(d_, count, cols_);
  for (const auto& [w, c] : terms_) out.add_term(w, c.topRows(count));
  return out;
}

MatPoly MatPoly::bottom_rows(Eigen::Index count) const {
  require(count >= 0 && count <= rows_, "row range");
  MatPoly out(d_, count, cols_);
  for (const auto& [w, c] : terms_) out.add_term(w, c.bottomRows(count));
  return out;
}

MatPoly MatPoly::scaled(cplx s) const {
  MatPoly out(d_, rows_, cols_);
  for (const auto& [w, c] : terms_) out.add_term(w, s * c);
  return out;
}

MatPoly MatPoly::right_multiplied(const Mat& c) const {
  require(c.rows() == cols_, "right factor shape");
  MatPoly out(d_, rows_, c.cols());
  for (const auto& [w, m] : terms_) out.add_term(w, m * c);
  return out;
}

MatPoly MatPoly::left_multiplied(const Mat& c) const {
  require(c.cols() == rows_, "left factor shape");
  MatPoly out(d_, c.rows(), cols_);
  for (const auto& [w, m] : terms_) out.add_term(w, c * m);
  return out;
}

MatPoly MatPoly::cleaned(double tol) const {
  MatPoly out(d_, rows_, cols_);
  for (const auto& [w, m] : terms_) {
    Mat c = m;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      cplx& z = c.data()[i];
      if (std::abs(z) <= tol) {
        z = 0.0;
      } else {
        if (std::abs(z.real()) <= tol) z = cplx(0.0, z.imag());
        if (std::abs(z.imag()) <= tol) z = cplx(z.real(), 0.0);
      }
    }
    out.add_term(w, c);
  }
  return out;
}

double MatPoly::max_abs() const {
  double m = 0.0;
  for (const auto& [w, c] : terms_) {
    if (c.size() > 0) m = std::max(m, c.cwiseAbs().maxCoeff());
  }
  return m;
}

bool MatPoly::operator==(const MatPoly& other) const {
  if (d_ != other.d_ || rows_ != other.rows_ || cols_ != other.cols_) return false;
  if (terms_.size() != other.terms_.size()) return false;
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  for (; a != terms_.end(); ++a, ++b) {
    if (a->first != b->first || a->second != b->second) return false;
  }
  return true;
}

RowTuple::RowTuple(int d_, Eigen::Index n_) : d(d_), n(n_) {
  entries.assign(static_cast<std::size_t>(d_), Mat::Zero(n_, n_));
}

RowTuple::RowTuple(std::vector<Mat> mats) : entries(std::move(mats)) {
  if (entries.empty()) throw ShapeMismatch("row tuple needs at least one entry");
  d = static_cast<int>(entries.size());
  n = entries.front().rows();
  for (const Mat& m : entries) {
    require(m.rows() == n && m.cols() == n, "row tuple entries must be n x n");
  }
}

Mat RowTuple::row_block() const {
  Mat out(n, n * d);
  for (int k = 0; k < d; ++k) out.middleCols(n * k, n) = entries[static_cast<std::size_t>(k)];
  return out;
}

RowTuple RowTuple::from_row_block(const Mat& block, int d) {
  require(d >= 1 && block.cols() == block.rows() * d, "row block must be n x (n d)");
  std::vector<Mat> mats;
  Eigen::Index n = block.rows();
  for (int k = 0; k < d; ++k) mats.push_back(block.middleCols(n * k, n));
  return RowTuple(std::move(mats));
}

double RowTuple::row_norm() const { return spectral_norm(row_block()); }

Mat RowTuple::power(const Word& alpha) const {
  Mat out = Mat::Identity(n, n);
  for (int letter : alpha) {
    if (letter < 1 || letter > d) throw InvalidWord("letter outside tuple range");
    out = out * entries[static_cast<std::size_t>(letter - 1)];
  }
  return out;
}

RowTuple RowTuple::adjoint_entries() const {
  std::vector<Mat> mats;
  for (const Mat& m : entries) mats.push_back(m.adjoint());
  return RowTuple(std::move(mats));
}

MatPoly nc_add(const MatPoly& p, const MatPoly& q) {
  require(p.d() == q.d(), "letter count mismatch");
  require(p.rows() == q.rows() && p.cols() == q.cols(), "shape mismatch in sum");
  MatPoly out = p;
  for (const auto& [w, c] : q.terms()) out.add_term(w, c);
  return out;
}

MatPoly nc_sub(const MatPoly& p, const MatPoly& q) { return nc_add(p, q.scaled(-1.0)); }

MatPoly nc_mul(const MatPoly& p, const MatPoly& q) {
  require(p.d() == q.d(), "letter count mismatch");
  require(p.cols() == q.rows(), "inner dimensions differ in product");
  MatPoly out(p.d(), p.rows(), q.cols());
  for (const auto& [a, pa] : p.terms()) {
    for (const auto& [b, qb] : q.terms()) out.add_term(concat_words(a, b), pa * qb);
  }
  return out;
}

MatPoly hconcat(const MatPoly& p, const MatPoly& q) {
  require(p.d() == q.d() && p.rows() == q.rows(), "row mismatch in block row");
  MatPoly out(p.d(), p.rows(), p.cols() + q.cols());
  for (const auto& [w, c] : p.terms()) {
    Mat m = Mat::Zero(p.rows(), out.cols());
    m.leftCols(p.cols()) = c;
    out.add_term(w, m);
  }
  for (const auto& [w, c] : q.terms()) {
    Mat m = Mat::Zero(p.rows(), out.cols());
    m.rightCols(q.cols()) = c;
    out.add_term(w, m);
  }
  return out;
}

MatPoly vconcat(const MatPoly& p, const MatPoly& q) {
  require(p.d() == q.d() && p.cols() == q.cols(), "column mismatch in block column");
  MatPoly out(p.d(), p.rows() + q.rows(), p.cols());
  for (const auto& [w, c] : p.terms()) {
    Mat m = Mat::Zero(out.rows(), p.cols());
    m.topRows(p.rows()) = c;
    out.add_term(w, m);
  }
  for (const auto& [w, c] : q.terms()) {
    Mat m = Mat::Zero(out.rows(), p.cols());
    m.bottomRows(q.rows()) = c;
    out.add_term(w, m);
  }
  return out;
}

MatPoly block_diag(const MatPoly& p, const MatPoly& q) {
  require(p.d() == q.d(), "letter count mismatch");
  MatPoly out(p.d(), p.rows() + q.rows(), p.cols() + q.cols());
  for (const auto& [w, c] : p.terms()) {
    Mat m = Mat::Zero(out.rows(), out.cols());
    m.topLeftCorner(p.rows(), p.cols()) = c;
    out.add_term(w, m);
  }
  for (const auto& [w, c] : q.terms()) {
    Mat m = Mat::Zero(out.rows(), out.cols());
    m.bottomRightCorner(q.rows(), q.cols()) = c;
    out.add_term(w, m);
  }
  return out;
}

MatPoly transpose_symbol(const MatPoly& p) {
  MatPoly out(p.d(), p.rows(), p.cols());
  for (const auto& [w, c] : p.terms()) out.add_term(reverse_word(w), c);
  return out;
}

Mat eval_at_point(const MatPoly& p, const RowTuple& z) {
  if (z.d != p.d()) throw ShapeMismatch("point and symbol use different letter counts");
  Mat out = Mat::Zero(z.n * p.rows(), z.n * p.cols());
  for (const auto& [w, c] : p.terms()) out += kron(z.power(w), c);
  return out;
}

double symbol_distance(const MatPoly& p, const MatPoly& q) {
  return nc_sub(p, q).max_abs();
}

std::string to_json(const MatPoly& p) {
  nlohmann::json j;
  j["d"] = p.d();
  j["rows"] = p.rows();
  j["cols"] = p.cols();
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [w, c] : p.terms()) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index k = 0; k < c.cols(); ++k) {
        row.push_back({c(i, k).real(), c(i, k).imag()});
      }
      rows.push_back(row);
    }
    terms.push_back({{"word", w}, {"matrix", rows}});
  }
  j["terms"] = terms;
  return j.dump();
}

MatPoly from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid symbol JSON: ") + e.what(), e.byte);
  }
  try {
    int d = j.at("d").get<int>();
    auto rows = j.at("rows").get<Eigen::Index>();
    auto cols = j.at("cols").get<Eigen::Index>();
    MatPoly p(d, rows, cols);
    for (const auto& term : j.at("terms")) {
      Word w = term.at("word").get<Word>();
      rank_word(w, d);
      const auto& m = term.at("matrix");
      if (static_cast<Eigen::Index>(m.size()) != rows) throw ShapeMismatch("term row count");
      Mat c(rows, cols);
      for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = m.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != cols) throw ShapeMismatch("term column count");
        for (Eigen::Index k = 0; k < cols; ++k) {
          const auto& e = row.at(static_cast<std::size_t>(k));
          c(i, k) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
        }
      }
      p.add_term(w, c);
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed symbol JSON: ") + e.what(), 0);
  }
}

std::string to_string(const MatPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  os << std::setprecision(6);
  bool first = true;
  for (const auto& [w, c] : p.terms()) {
    if (!first) os << " + ";
    first = false;
    if (c.size() == 1) {
      os << "(" << c(0, 0).real();
      if (c(0, 0).imag() != 0.0) os << (c(0, 0).imag() < 0 ? "" : "+") << c(0, 0).imag() << "i";
      os << ")";
    } else {
      os << "[";
      for (Eigen::Index i = 0; i < c.rows(); ++i) {
        os << (i ? "; " : "");
        for (Eigen::Index k = 0; k < c.cols(); ++k) {
          os << (k ? ", " : "") << c(i, k).real();
          if (c(i, k).imag() != 0.0) os << (c(i, k).imag() < 0 ? "" : "+") << c(i, k).imag() << "i";
        }
      }
      os << "]";
    }
    if (!w.empty()) os << "*";
    for (int letter : w) os << "z" << letter;
  }
  return os.str();
}

}  // namespace ncfock
