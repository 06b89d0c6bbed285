#pragma once

// JSON matrix and vector files, and report serialization.
//
// Matrix file: {"dim": n, "entries": [[e, ...], ...]} row-major.
// Vector file: {"dim": n, "entries": [e, ...]}.
// Each entry e is either [re, im] or a plain real number.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "conemeans/errors.hpp"
#include "conemeans/psd_core.hpp"
#include "conemeans/suites.hpp"
#include "conemeans/tolerance.hpp"

namespace conemeans {

using Json = nlohmann::ordered_json;

namespace detail {

inline Complex parse_entry(const Json& e, const std::string& where) {
  double re = 0.0;
  double im = 0.0;
  if (e.is_number()) {
    re = e.get<double>();
  } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    re = e[0].get<double>();
    im = e[1].get<double>();
  } else {
    throw InputParseError(where + ": entry must be a number or [re, im]");
  }
  if (!std::isfinite(re) || !std::isfinite(im)) throw InputParseError(where + ": non-finite entry");
  return {re, im};
}

inline Index parse_dim(const Json& j) {
  if (!j.is_object()) throw InputParseError("expected a JSON object with \"dim\" and \"entries\"");
  if (!j.contains("dim") || !j["dim"].is_number_integer()) throw InputParseError("\"dim\" must be an integer");
  const auto n = j["dim"].get<long long>();
  if (n < 1 || n > 64) throw InputParseError("\"dim\" out of range");
  if (!j.contains("entries") || !j["entries"].is_array()) throw InputParseError("\"entries\" must be an array");
  if (j["entries"].size() != static_cast<std::size_t>(n)) {
    throw InputParseError("\"entries\" has " + std::to_string(j["entries"].size()) + " rows, expected " +
                          std::to_string(n));
  }
  return static_cast<Index>(n);
}

/// Non-finite values never reach a report.
inline double finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string("non-finite value for ") + what);
  return x;
}

}  // namespace detail

[[nodiscard]] inline Matrix parse_matrix(const Json& j) {
  const Index n = detail::parse_dim(j);
  Matrix m(n, n);
  for (Index r = 0; r < n; ++r) {
    const Json& row = j["entries"][static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) {
      throw InputParseError("row " + std::to_string(r) + " must have " + std::to_string(n) + " entries");
    }
    for (Index c = 0; c < n; ++c) {
      m(r, c) = detail::parse_entry(row[static_cast<std::size_t>(c)],
                                    "entry (" + std::to_string(r) + "," + std::to_string(c) + ")");
    }
  }
  return m;
}

[[nodiscard]] inline Vector parse_vector(const Json& j) {
  const Index n = detail::parse_dim(j);
  Vector v(n);
  for (Index i = 0; i < n; ++i) {
    v[i] = detail::parse_entry(j["entries"][static_cast<std::size_t>(i)], "entry " + std::to_string(i));
  }
  return v;
}

[[nodiscard]] inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw InputParseError(source + ": " + e.what());
  }
}

[[nodiscard]] inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputParseError("cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_json_text(text.str(), path);
}

[[nodiscard]] inline Matrix read_matrix_file(const std::string& path) {
  try {
    return parse_matrix(read_json_file(path));
  } catch (const InputParseError& e) {
    throw InputParseError(path + ": " + e.what());
  }
}

[[nodiscard]] inline Vector read_vector_file(const std::string& path) {
  try {
    return parse_vector(read_json_file(path));
  } catch (const InputParseError& e) {
    throw InputParseError(path + ": " + e.what());
  }
}

/// Entries are always written as [re, im] pairs.
[[nodiscard]] inline Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) {
      row.push_back({detail::finite(m(r, c).real(), "matrix entry"), detail::finite(m(r, c).imag(), "matrix entry")});
    }
    rows.push_back(std::move(row));
  }
  return {{"dim", m.rows()}, {"entries", std::move(rows)}};
}

[[nodiscard]] inline Json to_json(const Vector& v) {
  Json entries = Json::array();
  for (Index i = 0; i < v.size(); ++i) {
    entries.push_back({detail::finite(v[i].real(), "vector entry"), detail::finite(v[i].imag(), "vector entry")});
  }
  return {{"dim", v.size()}, {"entries", std::move(entries)}};
}

[[nodiscard]] inline Json to_json(const ToleranceConfig& t) {
  return {{"sym", t.sym},     {"eig", t.eig}, {"pd", t.pd},
          {"recon", t.recon}, {"order", t.order}, {"eq", t.eq},
          {"rank_rel", t.rank_rel}, {"zero_rel", t.zero_rel}};
}

[[nodiscard]] inline Json to_json(const SuiteCheck& c) {
  Json j = {{"name", c.name},
            {"kind", c.witness_check ? "witness" : "bound"},
            {"count", c.count},
            {"limit", detail::finite(c.limit, "check limit")},
            {"max_residual", detail::finite(c.max_residual, "check residual")},
            {"violations", c.violations},
            {"passed", c.passed}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

[[nodiscard]] inline Json to_json(const Witness& w) {
  Json matrices = Json::object();
  for (const NamedMatrix& m : w.matrices) matrices[m.name] = to_json(m.value);
  return {{"label", w.label}, {"residual", detail::finite(w.residual, "witness residual")}, {"matrices", matrices}};
}

[[nodiscard]] inline Json to_json(const SuiteReport& r) {
  Json checks = Json::array();
  for (const SuiteCheck& c : r.checks) checks.push_back(to_json(c));
  Json witnesses = Json::array();
  for (const Witness& w : r.witnesses) witnesses.push_back(to_json(w));
  return {{"suite", r.suite},
          {"p", r.p},
          {"dim", r.dim},
          {"trials", r.trials},
          {"seed", r.seed},
          {"max_residual", detail::finite(r.max_residual, "suite residual")},
          {"passed", r.passed},
          {"checks", std::move(checks)},
          {"witnesses", std::move(witnesses)}};
}

}  // namespace conemeans
