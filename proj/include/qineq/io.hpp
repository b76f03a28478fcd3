#pragma once

// JSON formats:
//   matrix   {"n": <int>, "entries": [[[x0,x1,x2,x3], ... n per row], ... n rows]}
//   vector   {"n": <int>, "entries": [[x0,x1,x2,x3], ...]}
//   spectrum {"spheres": [{"re": r, "im": s, "mult": k}, ...]}
//   report   {"theorem", "terms": [{"label", "value"}], "slack", "pass", "invalid", "witness": {...}}
//
// Output is compact, key order is insertion order, and doubles are printed as
// the shortest decimal that round-trips, so equal inputs give equal bytes.

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>

#include "qineq/error.hpp"
#include "qineq/inequalities.hpp"
#include "qineq/qlinalg.hpp"
#include "qineq/spectral.hpp"

namespace qineq {

using Json = nlohmann::ordered_json;

namespace detail {

inline void write_json(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::null:
      out += "null";
      break;
    case Json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case Json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      break;
    case Json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      break;
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
      } else {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        out.append(buf, res.ptr);
      }
      break;
    }
    case Json::value_t::string:
      out += j.dump();
      break;
    case Json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ',';
        first = false;
        write_json(e, out);
      }
      out += ']';
      break;
    }
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        write_json(it.value(), out);
      }
      out += '}';
      break;
    }
    default:
      out += j.dump();
  }
}

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < std::min(byte, text.size()); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

inline std::string dump(const Json& j) {
  std::string out;
  detail::write_json(j, out);
  return out;
}

/// Parses JSON text; syntax errors become UsageError with line and column.
inline Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const auto [line, col] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw UsageError("JSON parse error at line " + std::to_string(line) + ", column " + std::to_string(col));
  }
}

inline Json to_json(const Quaternion& q) { return Json::array({q.x0, q.x1, q.x2, q.x3}); }

inline Quaternion quaternion_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) throw UsageError(where + ": quaternion must be an array of 4 numbers");
  double v[4];
  for (std::size_t k = 0; k < 4; ++k) {
    if (!j[k].is_number()) throw UsageError(where + ": quaternion component is not a number");
    v[k] = j[k].get<double>();
  }
  return {v[0], v[1], v[2], v[3]};
}

inline Json to_json(const QMatrix& t) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < t.dim(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < t.dim(); ++c) row.push_back(to_json(t(r, c)));
    rows.push_back(std::move(row));
  }
  Json j;
  j["n"] = t.dim();
  j["entries"] = std::move(rows);
  return j;
}

inline QMatrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
    throw UsageError("matrix: expected an object with keys \"n\" and \"entries\"");
  if (!j["n"].is_number_integer() || j["n"].get<std::int64_t>() < 1)
    throw UsageError("matrix: \"n\" must be a positive integer");
  const auto n = static_cast<std::size_t>(j["n"].get<std::int64_t>());
  if (n > kMaxDim) throw UsageError("matrix: n exceeds " + std::to_string(kMaxDim));
  const Json& rows = j["entries"];
  if (!rows.is_array() || rows.size() != n) throw UsageError("matrix: \"entries\" must hold n rows");
  QMatrix t(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (!rows[r].is_array() || rows[r].size() != n)
      throw UsageError("matrix: row " + std::to_string(r) + " must hold n entries");
    for (std::size_t c = 0; c < n; ++c)
      t(r, c) = quaternion_from_json(rows[r][c], "matrix entry (" + std::to_string(r) + ", " + std::to_string(c) + ")");
  }
  return t;
}

inline Json to_json(const QVector& u) {
  Json e = Json::array();
  for (const auto& q : u.entries()) e.push_back(to_json(q));
  Json j;
  j["n"] = u.size();
  j["entries"] = std::move(e);
  return j;
}

inline QVector vector_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array())
    throw UsageError("vector: expected an object with an \"entries\" array");
  const Json& e = j["entries"];
  if (e.empty() || e.size() > kMaxDim) throw UsageError("vector: bad length");
  if (j.contains("n") && (!j["n"].is_number_integer() || j["n"].get<std::size_t>() != e.size()))
    throw UsageError("vector: \"n\" does not match entries");
  QVector u(e.size());
  for (std::size_t k = 0; k < e.size(); ++k) u[k] = quaternion_from_json(e[k], "vector entry " + std::to_string(k));
  return u;
}

inline Json to_json(const SphericalSpectrum& s) {
  Json spheres = Json::array();
  for (const auto& sp : s.spheres) {
    Json o;
    o["re"] = sp.re;
    o["im"] = sp.im;
    o["mult"] = sp.mult;
    spheres.push_back(std::move(o));
  }
  Json j;
  j["spheres"] = std::move(spheres);
  return j;
}

inline Json to_json(const Witness& w) {
  Json j;
  j["trial"] = w.trial;
  if (w.matrix_seed) j["matrix_seed"] = *w.matrix_seed;
  if (w.vector_seed) j["vector_seed"] = *w.vector_seed;
  j["n"] = w.n;
  j["m"] = w.m;
  j["M"] = w.big_m;
  j["r"] = w.r ? Json(*w.r) : Json(nullptr);
  j["function"] = w.function;
  if (!w.eigenvalues.empty()) j["eigenvalues"] = w.eigenvalues;
  if (!w.x.empty()) {
    Json xs = Json::array();
    for (const auto& q : w.x) xs.push_back(to_json(q));
    j["x"] = std::move(xs);
  }
  return j;
}

inline Json to_json(const ChainReport& rep) {
  Json j;
  j["theorem"] = rep.theorem;
  if (!rep.chain.empty()) j["chain"] = rep.chain;
  Json terms = Json::array();
  for (const auto& t : rep.terms) {
    Json o;
    o["label"] = t.label;
    o["value"] = t.value;
    terms.push_back(std::move(o));
  }
  j["terms"] = std::move(terms);
  j["slack"] = rep.slack;
  j["pass"] = rep.pass;
  j["invalid"] = rep.invalid;
  if (rep.violation) j["violation_pair"] = *rep.violation;
  j["witness"] = to_json(rep.witness);
  return j;
}

}  // namespace qineq
