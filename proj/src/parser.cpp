#include <cctype>
#include <cstdlib>
#include <string>

#include "ncfock/errors.hpp"
#include "ncfock/ncpoly.hpp"

namespace ncfock {

namespace {

// Recursive-descent parser over the grammar
//   expr    := term (('+' | '-') term)*
//   term    := unary ('*' unary)*
//   unary   := ('+' | '-') unary | primary
//   primary := number ['i'] | 'i' | 'z' digit | '(' expr ')' | matrix
//   matrix  := '[' row (',' row)* ']'   row := '[' expr (',' expr)* ']'
class Parser {
 public:
  Parser(const std::string& text, int d) : text_(text), d_(d) {}

  MatPoly parse() {
    MatPoly out = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  MatPoly scalar(cplx value) const { return MatPoly::constant(d_, Mat::Constant(1, 1, value)); }

  static bool is_scalar(const MatPoly& p) { return p.rows() == 1 && p.cols() == 1; }

  MatPoly product(const MatPoly& a, const MatPoly& b, std::size_t at) const {
    if (a.cols() == b.rows()) return nc_mul(a, b);
    if (is_scalar(a) || is_scalar(b)) {
      const MatPoly& block_side = is_scalar(a) ? b : a;
      MatPoly out(d_, block_side.rows(), block_side.cols());
      for (const auto& [wa, ca] : a.terms()) {
        for (const auto& [wb, cb] : b.terms()) {
          const Mat& block = is_scalar(a) ? cb : ca;
          cplx factor = is_scalar(a) ? ca(0, 0) : cb(0, 0);
          out.add_term(concat_words(wa, wb), factor * block);
        }
      }
      return out;
    }
    throw ParseError("shape mismatch in product", at);
  }

  MatPoly sum(const MatPoly& a, const MatPoly& b, std::size_t at) const {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ParseError("shape mismatch in sum", at);
    return nc_add(a, b);
  }

  MatPoly expr() {
    MatPoly out = term();
    for (;;) {
      char c = peek();
      if (c != '+' && c != '-') return out;
      std::size_t at = pos_;
      ++pos_;
      MatPoly rhs = term();
      out = sum(out, c == '+' ? rhs : rhs.scaled(-1.0), at);
    }
  }

  MatPoly term() {
    MatPoly out = unary();
    while (peek() == '*') {
      std::size_t at = pos_;
      ++pos_;
      out = product(out, unary(), at);
    }
    return out;
  }

  MatPoly unary() {
    char c = peek();
    if (c == '-') {
      ++pos_;
      return unary().scaled(-1.0);
    }
    if (c == '+') {
      ++pos_;
      return unary();
    }
    return primary();
  }

  MatPoly primary() {
    char c = peek();
    if (c == '\0') fail("unexpected end of expression");
    if (c == '(') {
      ++pos_;
      MatPoly inner = expr();
      expect(')');
      return inner;
    }
    if (c == '[') return matrix();
    if (c == 'z') {
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        fail("expected variable index after 'z'");
      }
      int k = text_[pos_] - '0';
      if (k < 1 || k > d_) fail("variable z" + std::to_string(k) + " exceeds d=" + std::to_string(d_));
      ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        fail("variable index must be a single digit");
      }
      return MatPoly::variable(d_, k);
    }
    if (c == 'i') {
      ++pos_;
      return scalar(cplx(0.0, 1.0));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  MatPoly number() {
    const char* start = text_.c_str() + pos_;
    char* end = nullptr;
    double value = std::strtod(start, &end);
    if (end == start) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - start);
    if (pos_ < text_.size() && text_[pos_] == 'i') {
      ++pos_;
      return scalar(cplx(0.0, value));
    }
    return scalar(cplx(value, 0.0));
  }

  MatPoly matrix() {
    std::size_t open = pos_;
    expect('[');
    std::vector<std::vector<MatPoly>> rows;
    do {
      rows.push_back(matrix_row());
    } while (peek() == ',' && (++pos_, true));
    expect(']');
    std::size_t width = rows.front().size();
    for (const auto& row : rows) {
      if (row.size() != width) throw ParseError("ragged matrix literal", open);
    }
    MatPoly out(d_, static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t k = 0; k < width; ++k) {
        for (const auto& [w, c] : rows[i][k].terms()) {
          Mat m = Mat::Zero(out.rows(), out.cols());
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = c(0, 0);
          out.add_term(w, m);
        }
      }
    }
    return out;
  }

  std::vector<MatPoly> matrix_row() {
    expect('[');
    std::vector<MatPoly> row;
    do {
      std::size_t at = pos_;
      MatPoly entry = expr();
      if (!is_scalar(entry)) throw ParseError("matrix entries must be scalar", at);
      row.push_back(entry);
    } while (peek() == ',' && (++pos_, true));
    expect(']');
    return row;
  }

  const std::string& text_;
  int d_;
  std::size_t pos_ = 0;
};

}  // namespace

MatPoly parse_ncpoly(const std::string& text, int d) {
  if (d < 1 || d > 9) throw PreconditionError("letter count must lie in [1, 9]");
  return Parser(text, d).parse();
}

}  // namespace ncfock
