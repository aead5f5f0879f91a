#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qik {

/// Relative thresholds used by every zero, rank and eigenvalue test.
struct TolerancePolicy {
  double rel_zero = 1e-9;
  double rank_rel = 1e-10;
  double eig_match = 1e-8;

  void validate() const {
    auto check = [](double v, const char* name) {
      if (!(v > 0.0 && v < 1e-2)) {
        throw std::invalid_argument(std::string("tolerance ") + name + " must lie in (0, 1e-2)");
      }
    };
    check(rel_zero, "rel_zero");
    check(rank_rel, "rank_rel");
    check(eig_match, "eig_match");
  }

  /// Defaults, with rel_zero overridden by QIK_DEFAULT_TOL when set.
  static TolerancePolicy from_environment() {
    TolerancePolicy tol;
    if (const char* env = std::getenv("QIK_DEFAULT_TOL"); env != nullptr && *env != '\0') {
      try {
        tol.rel_zero = std::stod(env);
      } catch (const std::exception&) {
        throw std::invalid_argument(std::string("QIK_DEFAULT_TOL is not a number: ") + env);
      }
    }
    tol.validate();
    return tol;
  }

  friend bool operator==(const TolerancePolicy&, const TolerancePolicy&) = default;
};

}  // namespace qik
