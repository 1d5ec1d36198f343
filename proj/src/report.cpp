#include "ncfock/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace ncfock {

namespace {

std::string number(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  if (x == 0.0) x = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

void write(const Report& j, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const std::string colon = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case Report::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",";
        first = false;
        out += pad + Report(it.key()).dump() + colon;
        write(it.value(), indent, depth + 1, out);
      }
      out += close + "}";
      return;
    }
    case Report::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars or of scalar tuples stay on one line.
      bool flat = std::all_of(j.begin(), j.end(), [](const Report& e) {
        return e.is_primitive() ||
               (e.is_array() && std::all_of(e.begin(), e.end(), [](const Report& x) { return x.is_primitive(); }));
      });
      out += "[";
      bool first = true;
      for (const Report& e : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) out += pad;
        write(e, indent, depth + 1, out);
      }
      out += (flat ? "" : close) + "]";
      return;
    }
    case Report::value_t::number_float:
      out += number(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_report(const Report& report, int indent) {
  std::string out;
  write(report, indent, 0, out);
  out += "\n";
  return out;
}

Report matrix_report(const Mat& m) {
  Report rows = Report::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Report row = Report::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(Report::array({m(i, k).real(), m(i, k).imag()}));
    rows.push_back(row);
  }
  Report out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  out["data"] = rows;
  return out;
}

Report symbol_report(const MatPoly& p) {
  Report out;
  out["expression"] = to_string(p);
  Report parsed = Report::parse(to_json(p));
  Report symbol;
  for (const char* key : {"d", "rows", "cols"}) symbol[key] = parsed[key];
  Report terms = Report::array();
  for (const Report& t : parsed["terms"]) terms.push_back(Report{{"word", t["word"]}, {"matrix", t["matrix"]}});
  symbol["terms"] = terms;
  out["symbol"] = symbol;
  return out;
}

}  // namespace ncfock
