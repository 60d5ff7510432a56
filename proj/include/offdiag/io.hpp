#pragma once

// JSON formats.
//
// Matrix file: {"rows": r, "cols": c, "data": [[re, im], ...]} with data in
// row-major order. Reports serialize ClassificationReport with sorted keys;
// doubles are written in shortest round-trip form, so parse(dump(x))
// reproduces every value bit for bit.

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "offdiag/classify.hpp"
#include "offdiag/linalg.hpp"

namespace offdiag::io {

using nlohmann::json;

inline constexpr const char* kToolName = "offdiag";
inline constexpr const char* kToolVersion = "1.0.0";

inline json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::ParseError, "expected a [re, im] pair of numbers");
  }
  const cplx z{j[0].get<double>(), j[1].get<double>()};
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw Error(ErrorCode::ParseError, "non-finite number");
  return z;
}

inline json complex_list_to_json(const std::vector<cplx>& zs) {
  json out = json::array();
  for (const cplx& z : zs) out.push_back(complex_to_json(z));
  return out;
}

inline std::vector<cplx> complex_list_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "expected an array of [re, im] pairs");
  std::vector<cplx> out;
  out.reserve(j.size());
  for (const json& z : j) out.push_back(complex_from_json(z));
  return out;
}

inline json matrix_to_json(const CMatrix& m) {
  json data = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index k = 0; k < m.cols(); ++k) data.push_back(complex_to_json(m(i, k)));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline CMatrix matrix_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "matrix: expected a JSON object");
  for (const char* key : {"rows", "cols", "data"}) {
    if (!j.contains(key)) throw Error(ErrorCode::ParseError, std::string("matrix: missing key '") + key + "'");
  }
  if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer()) {
    throw Error(ErrorCode::ParseError, "matrix: rows and cols must be integers");
  }
  const auto rows = j["rows"].get<std::int64_t>();
  const auto cols = j["cols"].get<std::int64_t>();
  if (rows < 0 || cols < 0) throw Error(ErrorCode::ParseError, "matrix: negative dimension");
  const json& data = j["data"];
  if (!data.is_array() || static_cast<std::int64_t>(data.size()) != rows * cols) {
    throw Error(ErrorCode::ParseError, "matrix: data must hold rows*cols entries");
  }
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(data[static_cast<std::size_t>(i * cols + k)]);
  }
  return m;
}

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
}

inline CMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return matrix_from_json(parse_text(buf.str()));
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::InvalidArgument, "write failed for '" + path + "'");
}

inline json to_json(const Tolerances& t) {
  return json{{"tol_normal", t.tol_normal}, {"tol_rank", t.tol_rank}, {"tol_geom", t.tol_geom}, {"tol_gap", t.tol_gap}};
}

inline Tolerances tolerances_from_json(const json& j) {
  Tolerances t;
  t.tol_normal = j.at("tol_normal").get<double>();
  t.tol_rank = j.at("tol_rank").get<double>();
  t.tol_geom = j.at("tol_geom").get<double>();
  t.tol_gap = j.at("tol_gap").get<double>();
  t.validate();
  return t;
}

inline constexpr std::string_view to_string(CirclineKind k) {
  switch (k) {
    case CirclineKind::Line: return "Line";
    case CirclineKind::Circle: return "Circle";
    case CirclineKind::None: return "None";
  }
  return "None";
}

inline json to_json(const Circline& c) {
  json j{{"kind", to_string(c.kind)}, {"max_residual", c.max_residual}, {"threshold", c.threshold}};
  if (c.kind == CirclineKind::Line) {
    j["anchor"] = complex_to_json(c.line.anchor);
    j["direction"] = complex_to_json(c.line.direction);
  } else if (c.kind == CirclineKind::Circle) {
    j["center"] = complex_to_json(c.circle.center);
    j["radius"] = c.circle.radius;
  }
  return j;
}

inline Circline circline_from_json(const json& j) {
  Circline c;
  const std::string kind = j.at("kind").get<std::string>();
  c.max_residual = j.at("max_residual").get<double>();
  c.threshold = j.at("threshold").get<double>();
  if (kind == "Line") {
    c.kind = CirclineKind::Line;
    c.line = {complex_from_json(j.at("anchor")), complex_from_json(j.at("direction"))};
  } else if (kind == "Circle") {
    c.kind = CirclineKind::Circle;
    c.circle = {complex_from_json(j.at("center")), j.at("radius").get<double>()};
  } else if (kind == "None") {
    c.kind = CirclineKind::None;
  } else {
    throw Error(ErrorCode::ParseError, "circline: unknown kind '" + kind + "'");
  }
  return c;
}

inline json to_json(const CanonicalForm& f) {
  return json{{"kind", f.kind == CanonicalKind::Hermitian ? "Hermitian" : "Unitary"},
              {"lambda", complex_to_json(f.lambda)},
              {"mu", complex_to_json(f.mu)},
              {"a", matrix_to_json(f.a)},
              {"reconstruction_residual", f.reconstruction_residual}};
}

inline CanonicalForm canonical_from_json(const json& j) {
  CanonicalForm f;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind != "Hermitian" && kind != "Unitary") throw Error(ErrorCode::ParseError, "canonical: unknown kind");
  f.kind = kind == "Hermitian" ? CanonicalKind::Hermitian : CanonicalKind::Unitary;
  f.lambda = complex_from_json(j.at("lambda"));
  f.mu = complex_from_json(j.at("mu"));
  f.a = matrix_from_json(j.at("a"));
  f.reconstruction_residual = j.at("reconstruction_residual").get<double>();
  return f;
}

inline constexpr std::string_view to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::RankGap: return "RankGap";
    case WitnessKind::NormGap: return "NormGap";
    case WitnessKind::Both: return "Both";
  }
  return "Both";
}

inline json to_json(const Witness& w) {
  return json{{"kind", to_string(w.kind)},
              {"origin", w.origin},
              {"rank_ne", w.rank_ne},
              {"rank_sw", w.rank_sw},
              {"norm_ne", w.norm_ne},
              {"norm_sw", w.norm_sw},
              {"norm_gap", w.norm_gap()},
              {"frame", matrix_to_json(w.projection.range().columns())}};
}

/// The projection is rebuilt from the serialized frame only.
inline Witness witness_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  WitnessKind k = WitnessKind::Both;
  if (kind == "RankGap") {
    k = WitnessKind::RankGap;
  } else if (kind == "NormGap") {
    k = WitnessKind::NormGap;
  } else if (kind != "Both") {
    throw Error(ErrorCode::ParseError, "witness: unknown kind '" + kind + "'");
  }
  const Projection p = Projection::from_frame(Frame::from_orthonormal(matrix_from_json(j.at("frame"))));
  return Witness{p,
                 j.at("rank_ne").get<Index>(),
                 j.at("rank_sw").get<Index>(),
                 j.at("norm_ne").get<double>(),
                 j.at("norm_sw").get<double>(),
                 k,
                 j.at("origin").get<std::string>()};
}

inline Verdict verdict_from_string(const std::string& s) {
  if (s == "Holds") return Verdict::Holds;
  if (s == "Fails") return Verdict::Fails;
  if (s == "Unknown") return Verdict::Unknown;
  throw Error(ErrorCode::ParseError, "unknown verdict '" + s + "'");
}

inline json report_to_json(const ClassificationReport& r, std::uint64_t seed) {
  return json{{"tool", kToolName},
              {"version", kToolVersion},
              {"seed", seed},
              {"n", r.n},
              {"normal", r.normal},
              {"spectrum", complex_list_to_json(r.spectrum)},
              {"circline", to_json(r.circline)},
              {"verdict_cn", to_string(r.verdict_cn)},
              {"verdict_cr", to_string(r.verdict_cr)},
              {"path", r.path},
              {"canonical", r.canonical ? to_json(*r.canonical) : json(nullptr)},
              {"witness", r.witness ? to_json(*r.witness) : json(nullptr)},
              {"tolerances", to_json(r.tolerances)}};
}

inline ClassificationReport report_from_json(const json& j) {
  try {
    ClassificationReport r;
    r.n = j.at("n").get<Index>();
    r.normal = j.at("normal").get<bool>();
    r.spectrum = complex_list_from_json(j.at("spectrum"));
    r.circline = circline_from_json(j.at("circline"));
    r.verdict_cn = verdict_from_string(j.at("verdict_cn").get<std::string>());
    r.verdict_cr = verdict_from_string(j.at("verdict_cr").get<std::string>());
    r.path = j.at("path").get<std::string>();
    if (!j.at("canonical").is_null()) r.canonical = canonical_from_json(j.at("canonical"));
    if (!j.at("witness").is_null()) r.witness = witness_from_json(j.at("witness"));
    r.tolerances = tolerances_from_json(j.at("tolerances"));
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
  }
}

}  // namespace offdiag::io
