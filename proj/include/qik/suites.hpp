#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "qik/constructions.hpp"
#include "qik/sequences.hpp"
#include "qik/structure.hpp"

namespace qik {

struct SuiteInfo {
  std::string id;
  std::string description;
};

/// Theorem identifiers accepted by run_suite, in catalogue order.
inline const std::vector<SuiteInfo>& theorem_catalog() {
  static const std::vector<SuiteInfo> catalog{
      {"th21", "structure: T1 (m,C1)-isometric, T3^n = 0, spectra agree"},
      {"th22", "powers T^k stay in the class"},
      {"th23", "power bounded with normaloid T1C1T1C1 - I gives order 1"},
      {"th24", "T^r, T^s in the class give T^gcd(r,s) at order min(m,l)"},
      {"th25", "products of doubly commuting operators, T(CSC) = S(CTC)"},
      {"th26", "tensor products T (x) S under C (x) D"},
      {"th27", "nilpotent perturbation of an (m,C)-isometry"},
      {"th28", "nilpotent perturbation of an n-quasi-(m,C)-isometry"},
      {"pro21", "order escalation k >= m, l >= n"},
      {"pro25", "products under T(CSC) = (CSC)T and S(CSC) = (CSC)S"},
      {"lem21", "escalation in m when T commutes with CTC"},
      {"lem22", "gcd/min reduction of binomial recurrences on moment sequences"},
      {"lem23", "T in the class iff T (x) I and I (x) T are"},
      {"lem24", "multinomial expansion of Lambda_m(T + Q)"},
      {"cor21", "dense range removes the quasi order"},
      {"cor22", "power corollaries with r and r + 1"},
      {"cor23", "products T S^q"},
  };
  return catalog;
}

inline bool is_known_theorem(const std::string& id) {
  const auto& cat = theorem_catalog();
  return std::any_of(cat.begin(), cat.end(), [&id](const SuiteInfo& s) { return s.id == id; });
}

namespace trials {

struct World {
  ComplexMatrix t;
  Conjugation c;
};

inline World to_world(Rng& rng, const ComplexMatrix& op) {
  Frame f = random_frame(rng, op.rows());
  return {f.to_world(op), std::move(f.conjugation)};
}

inline int pick(Rng& rng, int lo, int hi) { return rng.integer(lo, hi); }

// Sizes of the range part and the nilpotent part for quasi order n.
inline std::pair<std::size_t, std::size_t> split_dims(Rng& rng, std::size_t d, int n) {
  if (n == 0 || d == 1) return {d, 0};
  const auto r = static_cast<std::size_t>(rng.integer(1, static_cast<int>(d) - 1));
  return {r, d - r};
}

inline VerificationReport inconclusive(std::string id, const std::string& why) {
  VerificationReport rep;
  rep.theorem_id = std::move(id);
  rep.require_flag(why, false);
  rep.outcome = Outcome::Inconclusive;
  return rep;
}

inline VerificationReport th21(Rng& rng, const TolerancePolicy& tol) {
  const auto d = static_cast<std::size_t>(pick(rng, 2, 6));
  const int m = pick(rng, 1, 3), n = pick(rng, 1, 3);
  const auto [r, d3] = split_dims(rng, d, n);
  const auto w = to_world(rng, model::assembled(rng, r, d3, m, n, false).op);
  try {
    return verify_structure_forward(w.t, w.c, m, n, tol);
  } catch (const Error& e) {
    return inconclusive("th21", e.what());
  }
}

inline VerificationReport th22(Rng& rng, const TolerancePolicy& tol) {
  const auto d = static_cast<std::size_t>(pick(rng, 2, 6));
  const int m = pick(rng, 1, 3), n = pick(rng, 0, 3), k = pick(rng, 1, 4);
  const auto [r, d3] = split_dims(rng, d, n);
  const auto w = to_world(rng, model::assembled(rng, r, d3, m, n, false).op);
  try {
    return check_power_theorem(w.t, w.c, m, n, k, tol);
  } catch (const NotReducing& e) {
    return inconclusive("th22", e.what());
  }
}

inline VerificationReport th23(Rng& rng, const TolerancePolicy& tol) {
  const auto d = static_cast<std::size_t>(pick(rng, 2, 6));
  const int m = pick(rng, 1, 3), n = pick(rng, 1, 3);
  const auto [r, d3] = split_dims(rng, d, n);
  const auto w = to_world(rng, model::assembled(rng, r, d3, 1, n, true, 0.2).op);
  return check_normaloid_theorem(w.t, w.c, m, n, tol);
}

// lambda * T0 with lambda^2 a primitive N-th root of unity: T^r is isometric
// for multiples r of N only.
struct RootedPower {
  World w;
  int order;
  int root;
};

inline RootedPower rooted_power(Rng& rng, std::size_t d) {
  const auto part = model::iso_part(rng, d, pick(rng, 1, 3), false);
  const int big_n = pick(rng, 1, 3);
  const complex lam = std::polar(1.0, std::numbers::pi / big_n);
  auto w = to_world(rng, part.op * lam);
  return {std::move(w), part.order, big_n};
}

inline VerificationReport th24(Rng& rng, const TolerancePolicy& tol) {
  const auto inst = rooted_power(rng, static_cast<std::size_t>(pick(rng, 1, 5)));
  const int r = inst.root * pick(rng, 1, 3), s = inst.root * pick(rng, 1, 3);
  const int m = inst.order + pick(rng, 0, 1), l = inst.order + pick(rng, 0, 1);
  auto rep = check_power_gcd(inst.w.t, inst.w.c, r, s, m, l, tol);
  rep.measurements["root_order"] = inst.root;
  return rep;
}

inline VerificationReport cor22(Rng& rng, const TolerancePolicy& tol) {
  const auto d = static_cast<std::size_t>(pick(rng, 1, 5));
  const int item = pick(rng, 1, 3);
  VerificationReport rep;
  if (item == 1) {
    const auto w = to_world(rng, model::iso_part(rng, d, 1, false).op);
    rep = check_power_gcd(w.t, w.c, 1, pick(rng, 2, 4), pick(rng, 1, 3), 1, tol);
  } else {
    const auto part = model::iso_part(rng, d, pick(rng, 1, 3), false);
    const auto w = to_world(rng, part.op);
    const int r = pick(rng, 1, 4);
    const int l = item == 2 ? part.order : part.order + pick(rng, 1, 2);
    rep = check_power_gcd(w.t, w.c, r, r + 1, part.order, l, tol);
  }
  rep.theorem_id = "cor22";
  rep.variant = "item" + std::to_string(item);
  return rep;
}

// Doubly commuting pair A (x) I and I (x) B built from real blocks in a common frame.
struct ProductPair {
  ComplexMatrix t, s;
  Conjugation c;
  std::pair<int, int> t_class, s_class;
};

inline model::Assembled real_factor(Rng& rng, std::size_t d) {
  const int n = d == 1 ? 0 : pick(rng, 0, 2);
  const auto [r, d3] = split_dims(rng, d, n);
  const int targets[] = {1, 3, 5};
  return model::assembled(rng, r, d3, targets[pick(rng, 0, 2)], n, true, 0.4);
}

inline ProductPair product_pair(Rng& rng) {
  static const std::pair<std::size_t, std::size_t> shapes[] = {{1, 2}, {2, 1}, {1, 3}, {3, 1}, {2, 2}, {2, 3}, {3, 2}};
  const auto [a, b] = shapes[pick(rng, 0, 6)];
  const auto fa = real_factor(rng, a);
  const auto fb = real_factor(rng, b);
  Frame f = random_frame(rng, a * b);
  return {f.to_world(kron(fa.op, ComplexMatrix::identity(b))), f.to_world(kron(ComplexMatrix::identity(a), fb.op)),
          std::move(f.conjugation), {fa.m, fa.n}, {fb.m, fb.n}};
}

inline VerificationReport product(Rng& rng, const TolerancePolicy& tol, ProductVariant v) {
  const auto p = product_pair(rng);
  const int q = v == ProductVariant::Power ? pick(rng, 1, 3) : 1;
  return check_product_theorem(p.t, p.s, p.c, p.t_class, p.s_class, v, q, tol);
}

inline VerificationReport th26(Rng& rng, const TolerancePolicy& tol) {
  const auto fa = real_factor(rng, static_cast<std::size_t>(pick(rng, 1, 3)));
  const auto fb = real_factor(rng, static_cast<std::size_t>(pick(rng, 1, 3)));
  const auto wa = to_world(rng, fa.op);
  const auto wb = to_world(rng, fb.op);
  return check_tensor(wa.t, wb.t, wa.c, wb.c, {fa.m, fa.n}, {fb.m, fb.n}, tol);
}

inline VerificationReport th27(Rng& rng, const TolerancePolicy& tol) {
  const auto d = static_cast<std::size_t>(pick(rng, 2, 6));
  const auto part = model::iso_part(rng, d, pick(rng, 1, 4), false);
  const ComplexMatrix q = model::commuting_nilpotent(rng, part);
  Frame f = random_frame(rng, d);
  return check_nilpotent_perturbation(f.to_world(part.op), f.to_world(q), f.conjugation, part.order, 0, false, tol);
}

inline VerificationReport th28(Rng& rng, const TolerancePolicy& tol) {
  const auto d = static_cast<std::size_t>(pick(rng, 3, 6));
  const int n = pick(rng, 1, 3);
  const auto r = static_cast<std::size_t>(pick(rng, 2, static_cast<int>(d) - 1));
  const std::size_t d3 = d - r;
  // mostly non-semisimple T, so that the radical polynomial gives Q != 0
  const auto a = model::assembled(rng, r, d3, pick(rng, 0, 3) > 0 ? 3 : 1, n, true, 0.3);
  ComplexMatrix q = model::evaluate_polynomial(model::radical_polynomial(a.iso, d3 > 0), a.op);
  const double norm = spectral_norm(q);
  q = norm > 1e-8 ? q * complex(rng.uniform(0.3, 0.8) / norm, 0.0) : ComplexMatrix(d, d);
  Frame f = random_frame(rng, d);
  return check_nilpotent_perturbation(f.to_world(a.op), f.to_world(q), f.conjugation, a.m, n, true, tol);
}

inline VerificationReport pro21(Rng& rng, const TolerancePolicy& tol) {
  const auto d = static_cast<std::size_t>(pick(rng, 2, 6));
  const int m = pick(rng, 1, 3), n = pick(rng, 0, 3);
  const auto [r, d3] = split_dims(rng, d, n);
  const auto w = to_world(rng, model::assembled(rng, r, d3, m, n, false).op);
  return check_order_escalation(w.t, w.c, m, n, 2, tol);
}

inline VerificationReport lem21(Rng& rng, const TolerancePolicy& tol) {
  const auto d = static_cast<std::size_t>(pick(rng, 2, 6));
  const int n = pick(rng, 0, 3);
  const auto [r, d3] = split_dims(rng, d, n);
  const auto a = model::assembled(rng, r, d3, rng.coin() ? 3 : 1, n, true, 0.4);
  const auto w = to_world(rng, a.op);
  return check_commuting_escalation(w.t, w.c, a.m, n, 3, tol);
}

inline VerificationReport cor21(Rng& rng, const TolerancePolicy& tol) {
  const auto d = static_cast<std::size_t>(pick(rng, 1, 6));
  const auto part = model::iso_part(rng, d, pick(rng, 1, 3), false);
  const auto w = to_world(rng, part.op);
  return check_dense_range(w.t, w.c, part.order, pick(rng, 1, 3), tol);
}

inline VerificationReport lem22(Rng& rng, const TolerancePolicy& tol) {
  const auto d = static_cast<std::size_t>(pick(rng, 1, 4));
  const auto inst = rooted_power(rng, d);
  const int r = inst.root * pick(rng, 1, 3), s = inst.root * pick(rng, 1, 3);
  const int m = inst.order + pick(rng, 0, 1), l = inst.order + pick(rng, 0, 1);
  const int J = 4;
  const int len = std::max({m * r, l * s, std::gcd(r, s) * std::min(m, l)}) + J;
  const auto x = gaussian_vector(rng, d);
  const auto a = moments(inst.w.t, inst.w.c, std::span<const complex>(x), len);
  return gcd_min_reduction(a, {m, r}, {l, s}, J, tol);
}

inline VerificationReport lem23(Rng& rng, const TolerancePolicy& tol) {
  const auto d = static_cast<std::size_t>(pick(rng, 1, 4));
  const int n = pick(rng, 0, 2);
  const auto [r, d3] = split_dims(rng, d, n);
  const auto a = model::assembled(rng, r, d3, pick(rng, 1, 3), n, false);
  const auto w = to_world(rng, a.op);
  const Conjugation dconj = random_conjugation(rng, static_cast<std::size_t>(pick(rng, 1, 3)));
  int m = a.m;
  const bool negative = a.m >= 2 && rng.coin();
  if (negative) m -= 1;
  auto rep = check_tensor_lemma(w.t, w.c, dconj, m, n, tol);
  rep.variant = negative ? "below minimal order" : "declared order";
  return rep;
}

inline VerificationReport lem24(Rng& rng, const TolerancePolicy& tol) {
  const auto d = static_cast<std::size_t>(pick(rng, 2, 5));
  const int m = pick(rng, 2, 5);
  if (rng.coin()) {
    const ComplexMatrix t = gaussian_matrix(rng, d, d) * complex(1.0 / std::sqrt(static_cast<double>(d)), 0.0);
    const ComplexMatrix q = t * (rng.complex_normal() * 0.3) + mat_mul(t, t) * (rng.complex_normal() * 0.2);
    return check_multinomial(t, q, random_conjugation(rng, d), m, tol);
  }
  const auto part = model::iso_part(rng, d, pick(rng, 1, 3), false);
  const ComplexMatrix q = model::commuting_nilpotent(rng, part);
  Frame f = random_frame(rng, d);
  return check_multinomial(f.to_world(part.op), f.to_world(q), f.conjugation, m, tol);
}

}  // namespace trials

/// One seeded trial of the given theorem suite.
inline VerificationReport run_trial(const std::string& id, std::uint64_t seed, const TolerancePolicy& tol = {}) {
  using Fn = VerificationReport (*)(Rng&, const TolerancePolicy&);
  static const std::vector<std::pair<std::string, Fn>> table{
      {"th21", trials::th21},
      {"th22", trials::th22},
      {"th23", trials::th23},
      {"th24", trials::th24},
      {"th25", [](Rng& r, const TolerancePolicy& t) { return trials::product(r, t, ProductVariant::Stated); }},
      {"th26", trials::th26},
      {"th27", trials::th27},
      {"th28", trials::th28},
      {"pro21", trials::pro21},
      {"pro25", [](Rng& r, const TolerancePolicy& t) { return trials::product(r, t, ProductVariant::Symmetric); }},
      {"lem21", trials::lem21},
      {"lem22", trials::lem22},
      {"lem23", trials::lem23},
      {"lem24", trials::lem24},
      {"cor21", trials::cor21},
      {"cor22", trials::cor22},
      {"cor23", [](Rng& r, const TolerancePolicy& t) { return trials::product(r, t, ProductVariant::Power); }},
  };
  for (const auto& [name, fn] : table) {
    if (name == id) {
      Rng rng(seed);
      VerificationReport rep = fn(rng, tol);
      rep.seed = seed;
      return rep;
    }
  }
  throw std::invalid_argument("unknown theorem id '" + id + "'");
}

struct SuiteSummary {
  std::string theorem_id;
  std::uint64_t seed = 0;
  int trials = 0;
  int passed = 0;
  int inconclusive = 0;
  int counterexamples = 0;
  double max_hypothesis_residual = 0.0;
  double max_conclusion_residual = 0.0;
  std::vector<VerificationReport> reports;  // indexed by trial

  bool all_pass() const { return passed == trials; }
};

/// Runs `trials` trials with seeds trial_seed(seed, i). Reports are stored by
/// trial index, so the result does not depend on `threads`.
inline SuiteSummary run_suite(const std::string& id, int trials, std::uint64_t seed, const TolerancePolicy& tol = {},
                              unsigned threads = 1) {
  if (!is_known_theorem(id)) throw std::invalid_argument("unknown theorem id '" + id + "'");
  if (trials < 0) throw std::invalid_argument("run_suite: trials must be >= 0");
  SuiteSummary sum;
  sum.theorem_id = id;
  sum.seed = seed;
  sum.trials = trials;
  sum.reports.resize(static_cast<std::size_t>(trials));

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next++; i < trials; i = next++) {
      const std::uint64_t s = trial_seed(seed, static_cast<std::uint64_t>(i));
      try {
        sum.reports[static_cast<std::size_t>(i)] = run_trial(id, s, tol);
      } catch (const std::exception& e) {
        auto rep = trials::inconclusive(id, std::string("trial raised: ") + e.what());
        rep.seed = s;
        sum.reports[static_cast<std::size_t>(i)] = std::move(rep);
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max(trials, 1))));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const auto& rep : sum.reports) {
    switch (rep.outcome) {
      case Outcome::Pass: ++sum.passed; break;
      case Outcome::Inconclusive: ++sum.inconclusive; break;
      case Outcome::CounterExample: ++sum.counterexamples; break;
    }
    for (const auto& h : rep.hypotheses) sum.max_hypothesis_residual = std::max(sum.max_hypothesis_residual, h.residual);
    sum.max_conclusion_residual = std::max(sum.max_conclusion_residual, rep.conclusion.residual);
  }
  return sum;
}

}  // namespace qik
