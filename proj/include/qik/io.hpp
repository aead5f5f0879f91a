#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qik/conjugation.hpp"
#include "qik/defects.hpp"
#include "qik/errors.hpp"
#include "qik/report.hpp"
#include "qik/sequences.hpp"
#include "qik/structure.hpp"
#include "qik/suites.hpp"
#include "qik/tolerance.hpp"
#include "qik/version.hpp"

namespace qik::io {

using json = nlohmann::ordered_json;

// Matrices: {"rows": r, "cols": c, "data": [[re, im], ...]} row-major,
// optionally "exact": true when every entry is a Gaussian integer.

inline json complex_to_json(const complex& z) { return json::array({z.real(), z.imag()}); }

inline complex complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError(where + ": expected [re, im]");
  }
  const complex z{j[0].get<double>(), j[1].get<double>()};
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw ParseError(where + ": non-finite entry");
  return z;
}

inline json matrix_to_json(const ComplexMatrix& a) {
  json data = json::array();
  for (const auto& z : a.data()) data.push_back(complex_to_json(z));
  return json{{"rows", a.rows()}, {"cols", a.cols()}, {"data", std::move(data)}};
}

struct MatrixFile {
  ComplexMatrix matrix;
  bool exact = false;
};

inline MatrixFile matrix_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("matrix: expected an object with rows, cols, data");
  for (const char* key : {"rows", "cols", "data"}) {
    if (!j.contains(key)) throw ParseError(std::string("matrix: missing \"") + key + "\"");
  }
  if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned()) {
    throw ParseError("matrix: rows and cols must be non-negative integers");
  }
  const auto rows = j["rows"].get<std::size_t>();
  const auto cols = j["cols"].get<std::size_t>();
  const json& data = j["data"];
  if (!data.is_array()) throw ParseError("matrix: data must be an array");
  if (data.size() != rows * cols) {
    throw ParseError("matrix: data has " + std::to_string(data.size()) + " entries, expected " +
                     std::to_string(rows * cols));
  }
  MatrixFile out{ComplexMatrix(rows, cols), false};
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.matrix.data()[i] = complex_from_json(data[i], "matrix entry " + std::to_string(i));
  }
  if (j.contains("exact")) {
    if (!j["exact"].is_boolean()) throw ParseError("matrix: \"exact\" must be a boolean");
    out.exact = j["exact"].get<bool>();
    if (out.exact && !exact::to_exact(out.matrix)) {
      throw ParseError("matrix: \"exact\": true requires Gaussian-integer entries");
    }
  }
  return out;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

inline MatrixFile load_matrix(const std::string& path) {
  try {
    return matrix_from_json(read_json_file(path));
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    if (msg.rfind("'" + path + "'", 0) == 0 || msg.rfind("cannot open", 0) == 0) throw;
    throw ParseError("'" + path + "': " + msg);
  }
}

// Conjugations: {"kind": "entrywise" | "flip" | "custom", "dim": d, "symbol": matrix}.

inline json conjugation_to_json(const Conjugation& c, const std::string& kind = "custom") {
  return json{{"kind", kind}, {"dim", c.dim()}, {"symbol", matrix_to_json(c.symbol())}};
}

/// Accepts a conjugation record or a bare matrix (taken as the symbol).
/// Validation errors (NotInvolutive, NotUnitary) propagate unchanged.
inline Conjugation conjugation_from_json(const json& j) {
  if (j.is_object() && j.contains("kind") && j["kind"].is_string()) {
    const auto kind = j["kind"].get<std::string>();
    if (kind == "entrywise" || kind == "flip") {
      if (!j.contains("dim") || !j["dim"].is_number_unsigned()) throw ParseError("conjugation: missing dim");
      const auto d = j["dim"].get<std::size_t>();
      return kind == "entrywise" ? Conjugation::entrywise(d) : Conjugation::flip(d);
    }
    if (kind != "custom") throw ParseError("conjugation: unknown kind '" + kind + "'");
  }
  const json& sym = j.is_object() && j.contains("symbol") ? j["symbol"] : j;
  return Conjugation(matrix_from_json(sym).matrix);
}

inline Conjugation load_conjugation(const std::string& path) { return conjugation_from_json(read_json_file(path)); }

inline json sequence_to_json(const MomentSequence& a) {
  json out = json::array();
  for (const auto& v : a.values) out.push_back(complex_to_json(v));
  return out;
}

inline MomentSequence sequence_from_json(const json& j) {
  const json& values = j.is_object() && j.contains("values") ? j["values"] : j;
  if (!values.is_array()) throw ParseError("sequence: expected a list of [re, im]");
  MomentSequence a;
  for (std::size_t i = 0; i < values.size(); ++i) {
    a.values.push_back(complex_from_json(values[i], "sequence entry " + std::to_string(i)));
  }
  return a;
}

inline json tolerance_to_json(const TolerancePolicy& t) {
  return json{{"rel_zero", t.rel_zero}, {"rank_rel", t.rank_rel}, {"eig_match", t.eig_match}};
}

/// Common envelope of every report file.
inline json envelope(const std::string& command, const TolerancePolicy& t) {
  return json{{"tool", "qik"}, {"version", kVersion}, {"command", command}, {"tolerance", tolerance_to_json(t)}};
}

inline json report_to_json(const VerificationReport& r) {
  json hyps = json::array();
  for (const auto& h : r.hypotheses) hyps.push_back(json{{"name", h.name}, {"residual", h.residual}, {"pass", h.pass}});
  json meas = json::object();
  for (const auto& [k, v] : r.measurements) meas[k] = v;
  json out{{"theorem_id", r.theorem_id}};
  if (!r.variant.empty()) out["variant"] = r.variant;
  out["seed"] = r.seed;
  out["instance_digest"] = json{{"dims", r.dims}, {"norms", r.norms}};
  out["hypotheses"] = std::move(hyps);
  out["conclusion"] = json{{"statement", r.conclusion.statement},
                           {"m", r.conclusion.m},
                           {"n", r.conclusion.n},
                           {"residual", r.conclusion.residual},
                           {"pass", r.conclusion.pass}};
  out["measurements"] = std::move(meas);
  out["rechecked_4x"] = r.rechecked_4x;
  out["exact_path"] = r.exact_path;
  out["outcome"] = to_string(r.outcome);
  return out;
}

inline json summary_to_json(const SuiteSummary& s, bool with_trials = true) {
  json out{{"theorem_id", s.theorem_id},   {"seed", s.seed},
           {"trials", s.trials},           {"passed", s.passed},
           {"inconclusive", s.inconclusive}, {"counterexamples", s.counterexamples},
           {"max_hypothesis_residual", s.max_hypothesis_residual},
           {"max_conclusion_residual", s.max_conclusion_residual}};
  if (with_trials) {
    json records = json::array();
    for (std::size_t i = 0; i < s.reports.size(); ++i) {
      json rec = report_to_json(s.reports[i]);
      rec["trial"] = i;
      records.push_back(std::move(rec));
    }
    out["records"] = std::move(records);
  }
  return out;
}

inline json classification_to_json(const ClassificationReport& r) {
  json grid = json::array();
  for (const auto& c : r.grid) {
    grid.push_back(json{{"m", c.m}, {"n", c.n}, {"residual", c.residual}, {"verdict", c.verdict}});
  }
  json minimal = json::array();
  for (const auto& [m, n] : r.minimal_pairs) minimal.push_back(json::array({m, n}));
  return json{{"m_max", r.m_max},
              {"n_max", r.n_max},
              {"with_conjugation", r.with_conjugation},
              {"exact", r.exact},
              {"grid", std::move(grid)},
              {"minimal_pairs", std::move(minimal)},
              {"commutes_with_ctc", r.commutes_with_ctc},
              {"monotone_in_m", r.monotone_in_m},
              {"monotone_in_n", r.monotone_in_n}};
}

inline json decomposition_to_json(const Decomposition& d) {
  return json{{"rank", d.rank},
              {"dense_range", d.dense_range()},
              {"basis", matrix_to_json(d.basis)},
              {"T1", matrix_to_json(d.t1)},
              {"T2", matrix_to_json(d.t2)},
              {"T3", matrix_to_json(d.t3)},
              {"residual_lower_left", d.residual_lower_left}};
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

}  // namespace qik::io
