#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qik/linalg.hpp"
#include "qik/tolerance.hpp"

namespace qik {

enum class Outcome { Pass, Inconclusive, CounterExample };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Inconclusive: return "inconclusive";
    case Outcome::CounterExample: return "counterexample";
  }
  return "?";
}

/// A measured hypothesis. `residual` is already divided by its scale and is
/// compared against rel_zero.
struct Check {
  std::string name;
  double residual = 0.0;
  bool pass = false;
};

struct Conclusion {
  std::string statement;
  int m = 0;  // expected class order
  int n = 0;  // expected quasi order (0 = plain)
  double residual = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::string theorem_id;
  std::string variant;
  std::vector<Check> hypotheses;
  Conclusion conclusion;
  std::uint64_t seed = 0;
  std::vector<std::size_t> dims;   // instance digest: operator dimensions
  std::vector<double> norms;       // instance digest: spectral norms of the inputs
  std::map<std::string, double> measurements;
  bool rechecked_4x = false;
  std::string exact_path = "not_run";  // not_run | not_applicable | zero | nonzero
  Outcome outcome = Outcome::Inconclusive;

  bool hypotheses_pass() const {
    return std::all_of(hypotheses.begin(), hypotheses.end(), [](const Check& c) { return c.pass; });
  }

  /// Records a hypothesis; returns its pass flag.
  bool require(std::string name, double residual, const TolerancePolicy& tol) {
    const bool ok = residual <= tol.rel_zero;
    hypotheses.push_back({std::move(name), residual, ok});
    return ok;
  }
  bool require_flag(std::string name, bool ok) {
    hypotheses.push_back({std::move(name), ok ? 0.0 : 1.0, ok});
    return ok;
  }
};

/// Settle the outcome of a report whose conclusion residual is filled in.
/// A failing conclusion is re-evaluated at 4x rel_zero and, when `exact`
/// can decide the statement in exact arithmetic, there; only a conclusion
/// that survives both is a counterexample. Reports with a failed hypothesis
/// are inconclusive.
inline void settle(VerificationReport& r, const TolerancePolicy& tol,
                   const std::function<std::optional<bool>()>& exact = {}) {
  if (!r.hypotheses_pass()) {
    r.conclusion.pass = r.conclusion.residual <= tol.rel_zero;
    r.outcome = Outcome::Inconclusive;
    return;
  }
  if (r.conclusion.residual <= tol.rel_zero) {
    r.conclusion.pass = true;
    r.outcome = Outcome::Pass;
    return;
  }
  r.rechecked_4x = true;
  if (r.conclusion.residual <= 4.0 * tol.rel_zero) {
    r.conclusion.pass = true;
    r.outcome = Outcome::Pass;
    return;
  }
  std::optional<bool> verdict = exact ? exact() : std::nullopt;
  r.exact_path = !verdict ? "not_applicable" : (*verdict ? "zero" : "nonzero");
  r.conclusion.pass = verdict.value_or(false);
  r.outcome = r.conclusion.pass ? Outcome::Pass : Outcome::CounterExample;
}

}  // namespace qik
