#pragma once

#include <json.hpp>
#include <string>

#include "ncfock/ncpoly.hpp"

namespace ncfock {

using Report = nlohmann::ordered_json;

// Serializes with keys in insertion order and floating-point numbers printed
// with 17 significant digits; non-finite numbers become strings.
std::string dump_report(const Report& report, int indent = 2);

Report matrix_report(const Mat& m);
Report symbol_report(const MatPoly& p);

}  // namespace ncfock
