#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "potent/oracle.hpp"

namespace potent {

namespace detail {

// Splits a line on single spaces, keeping 1-based column positions. Runs of
// spaces produce empty tokens, which the strict parsers reject.
inline std::vector<std::pair<std::string, int>> tokenize(const std::string& line) {
  std::vector<std::pair<std::string, int>> out;
  std::string cur;
  int col = 1;
  for (size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ' ') {
      out.emplace_back(cur, col);
      cur.clear();
      col = static_cast<int>(i) + 2;
    } else {
      cur += line[i];
    }
  }
  return out;
}

inline uint32_t parse_uint(const std::string& s, int line, int col,
                           const std::string& what) {
  if (s.empty()) throw ParseError("missing " + what, line, col);
  uint64_t v = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9') throw ParseError("bad " + what + " '" + s + "'", line, col);
    v = v * 10 + static_cast<uint64_t>(ch - '0');
    if (v > 0xffffffffULL) throw ParseError(what + " out of range", line, col);
  }
  return static_cast<uint32_t>(v);
}

inline std::vector<uint32_t> parse_uint_list(const std::string& s, int line, int col,
                                             const std::string& what) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw ParseError("expected bracketed list for " + what, line, col);
  std::vector<uint32_t> out;
  std::string body = s.substr(1, s.size() - 2);
  std::string item;
  for (size_t i = 0; i <= body.size(); ++i) {
    if (i == body.size() || body[i] == ',') {
      out.push_back(parse_uint(item, line, col, what + " entry"));
      item.clear();
    } else {
      item += body[i];
    }
  }
  return out;
}

}  // namespace detail

// Header line: "field: p=<p> m=<m>" with " modulus=[a0,...,am]" when m > 1.
inline std::string render_field_header(const Field& f) {
  return "field: " + f->header();
}

inline Field parse_field_header(const std::string& line, int line_no = 1) {
  auto toks = detail::tokenize(line);
  if (toks.empty() || toks[0].first != "field:")
    throw ParseError("expected 'field:'", line_no, toks.empty() ? 1 : toks[0].second);
  if (toks.size() < 3 || toks[1].first.rfind("p=", 0) != 0)
    throw ParseError("expected 'p=<prime>'", line_no, toks.size() > 1 ? toks[1].second : 1);
  if (toks[2].first.rfind("m=", 0) != 0)
    throw ParseError("expected 'm=<degree>'", line_no, toks[2].second);
  uint32_t p = detail::parse_uint(toks[1].first.substr(2), line_no, toks[1].second, "p");
  uint32_t m = detail::parse_uint(toks[2].first.substr(2), line_no, toks[2].second, "m");

  try {
    if (m == 1) {
      if (toks.size() != 3)
        throw ParseError("unexpected trailing tokens", line_no, toks[3].second);
      return FieldSpec::prime(p);
    }
    if (toks.size() != 4 || toks[3].first.rfind("modulus=", 0) != 0)
      throw ParseError("extension field needs 'modulus=[...]'", line_no,
                       toks.size() > 3 ? toks[3].second : toks[2].second);
    std::vector<uint32_t> mod = detail::parse_uint_list(
        toks[3].first.substr(8), line_no, toks[3].second, "modulus");
    if (mod.size() != m + 1)
      throw ParseError("modulus degree does not match m", line_no, toks[3].second);
    return FieldSpec::extension(p, mod);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what(), line_no, 1);
  }
}

// Matrix file:
//   field: p=3 m=1
//   n: 3
//   rows:
//   <n lines of n canonical entries, single-space separated>
inline std::string render_matrix_text(const Matrix& m) {
  if (!m.is_square()) throw DimensionMismatch("matrix text format is square-only");
  std::string out = render_field_header(m.field()) + "\n";
  out += "n: " + std::to_string(m.rows()) + "\n";
  out += "rows:\n";
  for (uint32_t i = 0; i < m.rows(); ++i) {
    for (uint32_t j = 0; j < m.cols(); ++j) {
      if (j) out += " ";
      out += to_string(m.at(i, j));
    }
    out += "\n";
  }
  return out;
}

inline Matrix parse_matrix_text(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) lines.push_back(cur);

  if (lines.empty()) throw ParseError("empty input", 1, 1);
  Field f = parse_field_header(lines[0], 1);

  if (lines.size() < 2) throw ParseError("missing 'n:' line", 2, 1);
  auto ntoks = detail::tokenize(lines[1]);
  if (ntoks.size() != 2 || ntoks[0].first != "n:")
    throw ParseError("expected 'n: <size>'", 2, 1);
  uint32_t n = detail::parse_uint(ntoks[1].first, 2, ntoks[1].second, "n");
  if (n == 0) throw ParseError("n must be positive", 2, ntoks[1].second);

  if (lines.size() < 3 || lines[2] != "rows:")
    throw ParseError("expected 'rows:'", 3, 1);
  if (lines.size() < 3 + n) throw ParseError("missing matrix rows", 4, 1);

  Matrix m(f, n, n);
  for (uint32_t i = 0; i < n; ++i) {
    int line_no = static_cast<int>(i) + 4;
    auto toks = detail::tokenize(lines[3 + i]);
    if (toks.size() != n)
      throw ParseError("expected " + std::to_string(n) + " entries, got " +
                           std::to_string(toks.size()),
                       line_no, 1);
    for (uint32_t j = 0; j < n; ++j) {
      try {
        m.set(i, j, parse_element(f, toks[j].first));
      } catch (const Error& e) {
        throw ParseError(e.what(), line_no, toks[j].second);
      }
    }
  }
  for (size_t i = 3 + n; i < lines.size(); ++i)
    if (!lines[i].empty())
      throw ParseError("unexpected trailing content", static_cast<int>(i) + 1, 1);
  return m;
}

// ---- JSON ----

inline nlohmann::json field_to_json(const Field& f) {
  nlohmann::json j{{"p", f->characteristic()}, {"m", f->degree()}};
  if (f->degree() > 1) j["modulus"] = f->modulus();
  return j;
}

inline Field field_from_json(const nlohmann::json& j) {
  uint32_t p = j.at("p").get<uint32_t>();
  uint32_t m = j.at("m").get<uint32_t>();
  if (m == 1) return FieldSpec::prime(p);
  return FieldSpec::extension(p, j.at("modulus").get<std::vector<uint32_t>>());
}

inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (uint32_t i = 0; i < m.rows(); ++i)
    for (uint32_t j = 0; j < m.cols(); ++j) rows.push_back(to_string(m.at(i, j)));
  return rows;
}

inline Matrix matrix_from_json(const nlohmann::json& j, const Field& f, uint32_t n) {
  if (!j.is_array() || j.size() != static_cast<size_t>(n) * n)
    throw Error("matrix array has wrong length");
  Matrix m(f, n, n);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j2 = 0; j2 < n; ++j2)
      m.set(i, j2, parse_element(f, j.at(static_cast<size_t>(i) * n + j2).get<std::string>()));
  return m;
}

inline nlohmann::json decomposition_to_json(const Decomposition& d) {
  nlohmann::json j;
  j["field"] = field_to_json(d.a.field());
  j["n"] = d.a.rows();
  j["A"] = matrix_to_json(d.a);
  j["E"] = matrix_to_json(d.e);
  j["V"] = matrix_to_json(d.v);
  j["route"] = {{"tag", route_tag_name(d.route.tag)}, {"detail", d.route.detail}};
  j["params"] = {{"k", d.params.k}, {"a", d.params.a}, {"l", d.params.l}, {"t", d.params.t}};
  j["checks"] = {{"sum_ok", d.checks.sum_ok},
                 {"p_potent_ok", d.checks.p_potent_ok},
                 {"nil_index", d.checks.nil_index}};
  return j;
}

inline Decomposition decomposition_from_json(const nlohmann::json& j) {
  Field f = field_from_json(j.at("field"));
  uint32_t n = j.at("n").get<uint32_t>();
  Matrix a = matrix_from_json(j.at("A"), f, n);
  Matrix e = matrix_from_json(j.at("E"), f, n);
  Matrix v = matrix_from_json(j.at("V"), f, n);
  const auto& jr = j.at("route");
  auto tag = route_tag_from_name(jr.at("tag").get<std::string>());
  if (!tag) throw Error("unknown route tag '" + jr.at("tag").get<std::string>() + "'");
  RouteInfo route{*tag, jr.at("detail").get<std::string>()};
  const auto& jp = j.at("params");
  RouteParams params{jp.at("k").get<int32_t>(), jp.at("a").get<int32_t>(),
                     jp.at("l").get<int32_t>(), jp.at("t").get<int32_t>()};
  const auto& jc = j.at("checks");
  Checks checks{jc.at("sum_ok").get<bool>(), jc.at("p_potent_ok").get<bool>(),
                jc.at("nil_index").get<uint32_t>()};
  return Decomposition{std::move(a), std::move(e), std::move(v),
                       std::move(route), params, checks, std::nullopt};
}

inline nlohmann::json sweep_report_to_json(const SweepReport& r) {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [tag, count] : r.histogram) hist[route_tag_name(tag)] = count;
  return nlohmann::json{{"total", r.total},
                        {"succeeded", r.succeeded},
                        {"trace_rejected", r.trace_rejected},
                        {"failed", r.failed},
                        {"histogram", hist},
                        {"failure_examples", r.failure_examples},
                        {"elapsed_ms", r.elapsed_ms}};
}

inline nlohmann::json sharpness_report_to_json(const SharpnessReport& r) {
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : r.cases)
    cases.push_back(nlohmann::json{
        {"coeffs", c.coeffs},
        {"smaller_index_impossible", c.smaller_index_impossible},
        {"certificate", decomposition_to_json(c.certificate)}});
  return nlohmann::json{{"cases", cases}, {"all_sharp", r.all_sharp}};
}

}  // namespace potent
