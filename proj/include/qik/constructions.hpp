#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qik/conjugation.hpp"
#include "qik/defects.hpp"
#include "qik/errors.hpp"
#include "qik/linalg.hpp"
#include "qik/random.hpp"
#include "qik/report.hpp"

namespace qik {

/// lambda I + N with N the order-p shift on the first p coordinates.
inline ComplexMatrix gen_scalar_plus_nilpotent(complex lambda, int p, std::size_t dim) {
  if (std::abs(std::abs(lambda) - 1.0) > 1e-12) throw std::invalid_argument("gen_scalar_plus_nilpotent: |lambda| must be 1");
  if (p < 1 || static_cast<std::size_t>(p) > dim) throw std::invalid_argument("gen_scalar_plus_nilpotent: need 1 <= p <= dim");
  ComplexMatrix t = ComplexMatrix::identity(dim) * lambda;
  for (int i = 0; i + 1 < p; ++i) t(static_cast<std::size_t>(i), static_cast<std::size_t>(i + 1)) = 1.0;
  return t;
}

/// Building blocks of hypothesis-satisfying operators. Everything here lives in
/// coordinates where the conjugation is entrywise complex conjugation; a Frame
/// carries it to a generic conjugation.
namespace model {

enum class BlockKind { Sign, Rotation, Isotropic, Jordan };

struct IsoBlock {
  BlockKind kind = BlockKind::Sign;
  ComplexMatrix op;
  int order = 1;        // minimal isometric order under entrywise conjugation
  double sign = 1.0;    // Sign, Isotropic, Jordan
  double angle = 0.0;   // real Rotation
};

struct IsoPart {
  ComplexMatrix op;
  int order = 1;
  bool real = false;
  std::vector<IsoBlock> blocks;
};

inline ComplexMatrix shift(std::size_t p) {
  ComplexMatrix n(p, p);
  for (std::size_t i = 0; i + 1 < p; ++i) n(i, i + 1) = 1.0;
  return n;
}

// u u^T with u = (1, i): nilpotent of order 2 and (u u^T)^T (u u^T) = 0.
inline ComplexMatrix isotropic_square() {
  const complex i{0.0, 1.0};
  return ComplexMatrix{{1.0, i}, {i, -1.0}};
}

inline complex coefficient(Rng& rng, bool real, double lo = 0.5, double hi = 1.2) {
  return real ? complex(rng.sign() * rng.uniform(lo, hi), 0.0) : rng.complex_in_annulus(lo, hi);
}

inline IsoBlock make_block(Rng& rng, BlockKind kind, std::size_t size, bool real) {
  IsoBlock b;
  b.kind = kind;
  b.sign = rng.sign();
  switch (kind) {
    case BlockKind::Sign:
      b.op = ComplexMatrix::identity(size) * complex(b.sign, 0.0);
      break;
    case BlockKind::Rotation: {
      b.angle = rng.uniform(0.6, 2.5);
      const complex z = real ? complex(b.angle, 0.0) : complex(b.angle, rng.uniform(-0.3, 0.3));
      b.op = complex_rotation(z);
      break;
    }
    case BlockKind::Isotropic:
      b.op = (ComplexMatrix::identity(2) + isotropic_square() * coefficient(rng, false)) * complex(b.sign, 0.0);
      b.order = 2;
      break;
    case BlockKind::Jordan:
      b.op = (ComplexMatrix::identity(size) + shift(size) * coefficient(rng, real)) * complex(b.sign, 0.0);
      b.order = 2 * static_cast<int>(size) - 1;
      break;
  }
  return b;
}

/// Block-diagonal isometric part of dimension `dim` whose order is the largest
/// achievable value not exceeding `m_target`.
inline IsoPart iso_part(Rng& rng, std::size_t dim, int m_target, bool real) {
  IsoPart part;
  part.real = real;
  std::size_t left = dim;
  auto push = [&](IsoBlock b) {
    left -= b.op.rows();
    part.order = std::max(part.order, b.order);
    part.blocks.push_back(std::move(b));
  };
  if (dim == 0) {
    part.op = ComplexMatrix(0, 0);
    return part;
  }
  if (m_target >= 5 && dim >= 3) {
    push(make_block(rng, BlockKind::Jordan, 3, real));
  } else if (m_target >= 3 && dim >= 2) {
    push(make_block(rng, BlockKind::Jordan, 2, real));
  } else if (m_target >= 2 && dim >= 2 && !real) {
    push(make_block(rng, BlockKind::Isotropic, 2, real));
  } else if (dim >= 2 && rng.coin()) {
    push(make_block(rng, BlockKind::Rotation, 2, real));
  } else {
    push(make_block(rng, BlockKind::Sign, 1, real));
  }
  while (left > 0) {
    std::vector<std::pair<BlockKind, std::size_t>> options{{BlockKind::Sign, 1}};
    if (left >= 2) {
      options.emplace_back(BlockKind::Sign, 2);
      options.emplace_back(BlockKind::Rotation, 2);
      if (m_target >= 2 && !real) options.emplace_back(BlockKind::Isotropic, 2);
      if (m_target >= 3) options.emplace_back(BlockKind::Jordan, 2);
    }
    if (left >= 3) {
      options.emplace_back(BlockKind::Sign, 3);
      if (m_target >= 5) options.emplace_back(BlockKind::Jordan, 3);
    }
    const auto [kind, size] = options[static_cast<std::size_t>(rng.integer(0, static_cast<int>(options.size()) - 1))];
    push(make_block(rng, kind, size, real));
  }
  part.op = ComplexMatrix(0, 0);
  for (const auto& b : part.blocks) part.op = block_diag(part.op, b.op);
  return part;
}

/// A random nilpotent of order exactly min(order, dim) (zero matrix when
/// dim == 0), built from shift-type blocks and a real orthogonal similarity.
inline ComplexMatrix nilpotent_part(Rng& rng, std::size_t dim, int order, bool real) {
  if (dim == 0 || order < 1) return ComplexMatrix(dim, dim);
  ComplexMatrix n(0, 0);
  std::size_t left = dim;
  bool first = true;
  while (left > 0) {
    const std::size_t cap = std::min<std::size_t>(static_cast<std::size_t>(order), left);
    const std::size_t size = first ? cap : static_cast<std::size_t>(rng.integer(1, static_cast<int>(cap)));
    first = false;
    ComplexMatrix b(size, size);
    for (std::size_t i = 0; i + 1 < size; ++i) b(i, i + 1) = coefficient(rng, real, 0.5, 1.0);
    n = block_diag(n, b);
    left -= size;
  }
  const ComplexMatrix p = random_real_orthogonal(rng, dim);
  return mat_mul(mat_mul(p, n), transpose(p));
}

/// A nilpotent commuting with part.op: random strictly triangular pieces on
/// Sign blocks, polynomials in the nilpotent of Jordan and Isotropic blocks.
inline ComplexMatrix commuting_nilpotent(Rng& rng, const IsoPart& part) {
  ComplexMatrix q(0, 0);
  for (const auto& b : part.blocks) {
    const std::size_t s = b.op.rows();
    ComplexMatrix piece(s, s);
    switch (b.kind) {
      case BlockKind::Sign:
        if (s > 1) piece = nilpotent_part(rng, s, static_cast<int>(s), part.real);
        break;
      case BlockKind::Rotation:
        break;
      case BlockKind::Isotropic:
        piece = isotropic_square() * coefficient(rng, false);
        break;
      case BlockKind::Jordan: {
        const ComplexMatrix n = shift(s);
        piece = n * coefficient(rng, part.real) + mat_mul(n, n) * coefficient(rng, part.real);
        break;
      }
    }
    q = block_diag(q, piece);
  }
  return q;
}

/// Real coefficients (constant term first) of the product of the distinct
/// factors of the minimal polynomials of the blocks of a real IsoPart.
inline std::vector<double> radical_polynomial(const IsoPart& part, bool include_zero) {
  std::vector<std::vector<double>> factors;
  auto add = [&factors](std::vector<double> f) {
    if (std::find(factors.begin(), factors.end(), f) == factors.end()) factors.push_back(std::move(f));
  };
  for (const auto& b : part.blocks) {
    if (b.kind == BlockKind::Rotation) {
      add({1.0, -2.0 * std::cos(b.angle), 1.0});
    } else {
      add({-b.sign, 1.0});
    }
  }
  if (include_zero) add({0.0, 1.0});
  std::vector<double> poly{1.0};
  for (const auto& f : factors) {
    std::vector<double> next(poly.size() + f.size() - 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j) next[i + j] += poly[i] * f[j];
    poly = std::move(next);
  }
  return poly;
}

inline ComplexMatrix evaluate_polynomial(const std::vector<double>& coeffs, const ComplexMatrix& t) {
  ComplexMatrix acc(t.rows(), t.cols());
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = mat_mul(acc, t) + ComplexMatrix::identity(t.rows()) * complex(*it, 0.0);
  }
  return acc;
}

/// [[T1, T2], [0, T3]] with T1 isometric of order <= m_target and T3^n = 0.
struct Assembled {
  ComplexMatrix op;
  IsoPart iso;
  ComplexMatrix t2, t3;
  int m = 1;  // achieved order of the isometric part
  int n = 0;  // nilpotency order of T3 (0 when T3 is empty)
};

inline Assembled assembled(Rng& rng, std::size_t r, std::size_t d3, int m_target, int n_target, bool real,
                           double coupling = 0.5) {
  Assembled a;
  a.iso = iso_part(rng, r, m_target, real);
  a.m = a.iso.order;
  a.t3 = nilpotent_part(rng, d3, n_target, real);
  a.n = d3 == 0 ? 0 : std::min<int>(n_target, static_cast<int>(d3));
  a.t2 = gaussian_matrix(rng, r, d3, real) * complex(coupling, 0.0);
  a.op = from_blocks(a.iso.op, a.t2, ComplexMatrix(d3, r), a.t3);
  return a;
}

}  // namespace model

enum class InstanceKind { Unitary, ScalarPlusNilpotent, Assembled, Tensor };

inline const char* to_string(InstanceKind k) {
  switch (k) {
    case InstanceKind::Unitary: return "unitary";
    case InstanceKind::ScalarPlusNilpotent: return "scalar_plus_nilpotent";
    case InstanceKind::Assembled: return "assembled";
    case InstanceKind::Tensor: return "tensor";
  }
  return "?";
}

inline InstanceKind parse_instance_kind(const std::string& s) {
  for (auto k : {InstanceKind::Unitary, InstanceKind::ScalarPlusNilpotent, InstanceKind::Assembled, InstanceKind::Tensor}) {
    if (s == to_string(k)) return k;
  }
  throw ParseError("unknown instance kind '" + s + "'");
}

/// A generated operator with a conjugation and the class it is declared to be in.
struct Instance {
  ComplexMatrix t;
  Conjugation c;
  int m = 1;
  int n = 0;
  InstanceKind kind = InstanceKind::Unitary;
  std::uint64_t seed = 0;
};

/// Random instance of the given kind. For `Assembled`, (m, n) is the declared
/// class; the other kinds pick their own orders (m, n are hints for
/// scalar_plus_nilpotent: p = (m + 1) / 2).
inline Instance gen_random_instance(InstanceKind kind, std::size_t dim, std::uint64_t seed, int m = 2, int n = 1) {
  if (dim < 1) throw std::invalid_argument("gen_random_instance: dim must be >= 1");
  if (m < 1 || m > kMaxOrder || n < 0 || n > kMaxOrder) throw std::invalid_argument("gen_random_instance: order out of range");
  Rng rng(seed);
  ComplexMatrix op;
  int dm = 1, dn = 0;
  switch (kind) {
    case InstanceKind::Unitary:
      op = random_real_orthogonal(rng, dim);
      break;
    case InstanceKind::ScalarPlusNilpotent: {
      const int p = std::clamp((m + 1) / 2, 1, static_cast<int>(dim));
      op = gen_scalar_plus_nilpotent(rng.sign(), p, dim);
      dm = 2 * p - 1;
      break;
    }
    case InstanceKind::Assembled: {
      const std::size_t r = (n == 0 || dim == 1) ? dim : static_cast<std::size_t>(rng.integer(1, static_cast<int>(dim) - 1));
      op = model::assembled(rng, r, dim - r, m, n, false).op;
      dm = m;
      dn = n;
      break;
    }
    case InstanceKind::Tensor: {
      std::size_t a = 1;
      for (std::size_t f = 2; f * f <= dim; ++f)
        if (dim % f == 0) a = f;
      const std::size_t b = dim / a;
      auto factor = [&rng](std::size_t d, int& fm, int& fn) {
        const std::size_t r = d == 1 ? 1 : static_cast<std::size_t>(rng.integer(1, static_cast<int>(d)));
        const auto part = model::assembled(rng, r, d - r, rng.coin() ? 3 : 1, 1, true);
        fm = part.m;
        fn = part.n;
        return part.op;
      };
      int m1 = 1, n1 = 0, m2 = 1, n2 = 0;
      const ComplexMatrix ta = factor(a, m1, n1);
      const ComplexMatrix tb = factor(b, m2, n2);
      op = kron(ta, tb);
      dm = m1 + m2 - 1;
      dn = std::max(n1, n2);
      break;
    }
  }
  Frame frame = random_frame(rng, dim);
  return {frame.to_world(op), std::move(frame.conjugation), dm, dn, kind, seed};
}

/// Smallest p with Q^p negligible (Q^p <= rel_zero * max(1,||Q||)^p * dim), or
/// nullopt when Q is not nilpotent within its dimension.
inline std::optional<int> measure_nilpotent_order(const ComplexMatrix& q, const TolerancePolicy& tol = {}) {
  require_square(q, "measure_nilpotent_order");
  const std::size_t d = q.rows();
  const double base = std::max(1.0, spectral_norm(q));
  ComplexMatrix p = ComplexMatrix::identity(d);
  for (std::size_t k = 1; k <= std::max<std::size_t>(d, 1); ++k) {
    p = mat_mul(p, q);
    if (is_zero(p, std::pow(base, static_cast<double>(k)) * static_cast<double>(std::max<std::size_t>(d, 1)), tol)) {
      return static_cast<int>(k);
    }
  }
  return std::nullopt;
}

namespace detail {

inline double relative_commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double scale = std::max(1.0, spectral_norm(a)) * std::max(1.0, spectral_norm(b)) *
                       static_cast<double>(std::max<std::size_t>(a.rows(), 1));
  return frobenius_norm(commutator(a, b)) / scale;
}

// ||X Y - Z W|| relative to the factor norms.
inline double relative_product_gap(const ComplexMatrix& x, const ComplexMatrix& y, const ComplexMatrix& z,
                                   const ComplexMatrix& w) {
  const double scale = std::max({1.0, spectral_norm(x) * spectral_norm(y), spectral_norm(z) * spectral_norm(w)}) *
                       static_cast<double>(std::max<std::size_t>(x.rows(), 1));
  return frobenius_norm(mat_mul(x, y) - mat_mul(z, w)) / scale;
}

inline std::string class_label(int m, int n, const char* conj = "C") {
  const std::string base = "(" + std::to_string(m) + "," + conj + ")";
  return n == 0 ? base : std::to_string(n) + "-quasi-" + base;
}

inline double class_residual(const ComplexMatrix& t, const Conjugation& c, int m, int n) {
  return class_defect(t, &c, m, n).residual();
}

inline std::function<std::optional<bool>()> exact_class(ComplexMatrix t, Conjugation c, int m, int n) {
  return [t = std::move(t), c = std::move(c), m, n]() { return exact::in_class(t, &c, m, n); };
}

// Records "C splits along R(X^n)" as a hypothesis; returns false when it does not.
inline bool require_split(VerificationReport& rep, const Conjugation& c, const ComplexMatrix& x, int n,
                          const TolerancePolicy& tol, const std::string& name) {
  if (n < 1) return true;
  const auto cs = column_space_basis(mat_power(x, static_cast<unsigned>(n)), tol);
  try {
    const auto split = split_along(c, cs.basis);
    rep.measurements["conjugation_off_block"] = split.off_block_residual;
    return rep.require_flag("C splits along R(" + name + "^" + std::to_string(n) + ")", true);
  } catch (const NotReducing& e) {
    rep.measurements["conjugation_off_block"] = e.residual();
    return rep.require_flag("C splits along R(" + name + "^" + std::to_string(n) + ")", false);
  }
}

}  // namespace detail

/// If T is in the class (m, n) then so is T^k. Throws NotReducing when n >= 1
/// and C does not split along R(T^n).
inline VerificationReport check_power_theorem(const ComplexMatrix& t, const Conjugation& c, int m, int n, int k,
                                              const TolerancePolicy& tol = {}) {
  if (k < 1) throw std::invalid_argument("check_power_theorem: k must be >= 1");
  VerificationReport rep;
  rep.theorem_id = "th22";
  rep.dims = {t.rows()};
  rep.norms = {spectral_norm(t)};
  rep.measurements["k"] = k;
  if (n >= 1) {
    const auto cs = column_space_basis(mat_power(t, static_cast<unsigned>(n)), tol);
    rep.measurements["conjugation_off_block"] = split_along(c, cs.basis).off_block_residual;
    rep.require_flag("C splits along R(T^n)", true);
  }
  rep.require("T is " + detail::class_label(m, n), detail::class_residual(t, c, m, n), tol);
  ComplexMatrix tk = mat_power(t, static_cast<unsigned>(k));
  rep.conclusion = {"T^" + std::to_string(k) + " is " + detail::class_label(m, n), m, n,
                    detail::class_residual(tk, c, m, n), false};
  settle(rep, tol, detail::exact_class(std::move(tk), c, m, n));
  return rep;
}

/// Order escalation: class (m, n) implies (k, l) for k >= m, l >= n, checked
/// on the window k <= m + span, l <= n + span.
inline VerificationReport check_order_escalation(const ComplexMatrix& t, const Conjugation& c, int m, int n,
                                                 int span = 2, const TolerancePolicy& tol = {}) {
  VerificationReport rep;
  rep.theorem_id = "pro21";
  rep.dims = {t.rows()};
  rep.norms = {spectral_norm(t)};
  detail::require_split(rep, c, t, n, tol, "T");
  rep.require("T is " + detail::class_label(m, n), detail::class_residual(t, c, m, n), tol);
  double worst = 0.0;
  for (int k = m; k <= std::min(m + span, kMaxOrder); ++k)
    for (int l = n; l <= std::min(n + span, kMaxOrder); ++l) worst = std::max(worst, detail::class_residual(t, c, k, l));
  rep.conclusion = {"T is " + detail::class_label(m + span, n + span) + " and every class in between", m + span,
                    n + span, worst, false};
  settle(rep, tol);
  return rep;
}

/// With T(CTC) = (CTC)T, class (m, n) implies (k, n) for m <= k <= m + span.
inline VerificationReport check_commuting_escalation(const ComplexMatrix& t, const Conjugation& c, int m, int n,
                                                     int span = 3, const TolerancePolicy& tol = {}) {
  VerificationReport rep;
  rep.theorem_id = "lem21";
  rep.dims = {t.rows()};
  rep.norms = {spectral_norm(t)};
  rep.require("T(CTC) = (CTC)T", detail::relative_commutator(t, conj_similarity(c, t)), tol);
  rep.require("T is " + detail::class_label(m, n), detail::class_residual(t, c, m, n), tol);
  double worst = 0.0;
  for (int k = m; k <= std::min(m + span, kMaxOrder); ++k) worst = std::max(worst, detail::class_residual(t, c, k, n));
  rep.conclusion = {"T is " + detail::class_label(m + span, n), m + span, n, worst, false};
  settle(rep, tol);
  return rep;
}

/// Dense range: class (m, n) with R(T^n) dense gives class (m, 0).
inline VerificationReport check_dense_range(const ComplexMatrix& t, const Conjugation& c, int m, int n,
                                            const TolerancePolicy& tol = {}) {
  VerificationReport rep;
  rep.theorem_id = "cor21";
  rep.dims = {t.rows()};
  rep.norms = {spectral_norm(t)};
  rep.require("T is " + detail::class_label(m, n), detail::class_residual(t, c, m, n), tol);
  const auto cs = column_space_basis(mat_power(t, static_cast<unsigned>(std::max(n, 0))), tol);
  rep.measurements["rank"] = static_cast<double>(cs.rank);
  rep.require_flag("R(T^n) dense", cs.rank == t.rows());
  rep.conclusion = {"T is " + detail::class_label(m, 0), m, 0, detail::class_residual(t, c, m, 0), false};
  settle(rep, tol, detail::exact_class(t, c, m, 0));
  return rep;
}

/// Power bounded with T1 C1 T1 C1 - I normaloid: class (m, n) collapses to (1, n).
inline VerificationReport check_normaloid_theorem(const ComplexMatrix& t, const Conjugation& c, int m, int n,
                                                  const TolerancePolicy& tol = {}) {
  if (n < 1) throw std::invalid_argument("check_normaloid_theorem: n must be >= 1");
  VerificationReport rep;
  rep.theorem_id = "th23";
  rep.dims = {t.rows()};
  rep.norms = {spectral_norm(t)};
  rep.require("T is " + detail::class_label(m, n), detail::class_residual(t, c, m, n), tol);
  const auto cs = column_space_basis(mat_power(t, static_cast<unsigned>(n)), tol);
  std::optional<SplitConjugation> split;
  try {
    split = split_along(c, cs.basis, &cs.complement);
    rep.measurements["conjugation_off_block"] = split->off_block_residual;
    rep.require_flag("C splits along R(T^n)", true);
  } catch (const NotReducing& e) {
    rep.measurements["conjugation_off_block"] = e.residual();
    rep.require_flag("C splits along R(T^n)", false);
  }
  rep.require_flag("T power bounded (K=64, B=10)", is_power_bounded(t, 64, 10.0, tol));
  if (split && cs.rank > 0) {
    const ComplexMatrix t1 = mat_mul(mat_mul(adjoint(cs.basis), t), cs.basis);
    const ComplexMatrix x = mat_mul(t1, conj_similarity(split->first, t1)) - ComplexMatrix::identity(cs.rank);
    rep.require_flag("T1 C1 T1 C1 - I normaloid", is_normaloid(x, tol));
  }
  rep.conclusion = {"T is " + detail::class_label(1, n), 1, n, detail::class_residual(t, c, 1, n), false};
  settle(rep, tol, detail::exact_class(t, c, 1, n));
  return rep;
}

/// T^r in (m, C) and T^s in (l, C) give T^gcd(r,s) in (min(m,l), C).
inline VerificationReport check_power_gcd(const ComplexMatrix& t, const Conjugation& c, int r, int s, int m, int l,
                                          const TolerancePolicy& tol = {}) {
  if (r < 1 || s < 1) throw std::invalid_argument("check_power_gcd: r and s must be >= 1");
  const int q = std::gcd(r, s);
  const int p = std::min(m, l);
  VerificationReport rep;
  rep.theorem_id = "th24";
  rep.dims = {t.rows()};
  rep.norms = {spectral_norm(t)};
  rep.measurements["q"] = q;
  rep.measurements["p"] = p;
  rep.require("T^" + std::to_string(r) + " is " + detail::class_label(m, 0),
              detail::class_residual(mat_power(t, static_cast<unsigned>(r)), c, m, 0), tol);
  rep.require("T^" + std::to_string(s) + " is " + detail::class_label(l, 0),
              detail::class_residual(mat_power(t, static_cast<unsigned>(s)), c, l, 0), tol);
  ComplexMatrix tq = mat_power(t, static_cast<unsigned>(q));
  rep.conclusion = {"T^" + std::to_string(q) + " is " + detail::class_label(p, 0), p, 0,
                    detail::class_residual(tq, c, p, 0), false};
  settle(rep, tol, detail::exact_class(std::move(tq), c, p, 0));
  return rep;
}

enum class ProductVariant { Stated, Symmetric, Power };

inline const char* to_string(ProductVariant v) {
  switch (v) {
    case ProductVariant::Stated: return "stated";
    case ProductVariant::Symmetric: return "symmetric";
    case ProductVariant::Power: return "power";
  }
  return "?";
}

/// T in (k, n1), S in (m, n2), doubly commuting plus the variant's relations
/// with C: TS (or T S^q) is in (k + m - 1, max(n1, n2)).
inline VerificationReport check_product_theorem(const ComplexMatrix& t, const ComplexMatrix& s, const Conjugation& c,
                                                std::pair<int, int> t_class, std::pair<int, int> s_class,
                                                ProductVariant variant = ProductVariant::Stated, int q = 1,
                                                const TolerancePolicy& tol = {}) {
  if (t.rows() != s.rows()) throw DimensionMismatch("check_product_theorem: T and S differ in size");
  if (q < 1) throw std::invalid_argument("check_product_theorem: q must be >= 1");
  const auto [k, n1] = t_class;
  const auto [m, n2] = s_class;
  const int np = std::max(n1, n2);
  const ComplexMatrix ctc = conj_similarity(c, t);
  const ComplexMatrix csc = conj_similarity(c, s);

  VerificationReport rep;
  rep.theorem_id = variant == ProductVariant::Stated ? "th25" : variant == ProductVariant::Symmetric ? "pro25" : "cor23";
  rep.variant = to_string(variant);
  rep.dims = {t.rows(), s.rows()};
  rep.norms = {spectral_norm(t), spectral_norm(s)};
  rep.require("TS = ST", detail::relative_commutator(t, s), tol);
  rep.require("TS* = S*T", detail::relative_commutator(t, adjoint(s)), tol);
  if (variant == ProductVariant::Stated) {
    rep.require("T(CSC) = S(CTC)", detail::relative_product_gap(t, csc, s, ctc), tol);
  } else {
    rep.require("T(CSC) = (CSC)T", detail::relative_commutator(t, csc), tol);
  }
  rep.require("T(CTC) = (CTC)T", detail::relative_commutator(t, ctc), tol);
  rep.require("S*(CTC) = (CTC)S*", detail::relative_commutator(adjoint(s), ctc), tol);
  if (variant == ProductVariant::Symmetric) rep.require("S(CSC) = (CSC)S", detail::relative_commutator(s, csc), tol);
  if (variant != ProductVariant::Symmetric) detail::require_split(rep, c, s, np, tol, "S");
  rep.require("T is " + detail::class_label(k, n1), detail::class_residual(t, c, k, n1), tol);
  rep.require("S is " + detail::class_label(m, n2), detail::class_residual(s, c, m, n2), tol);

  const int order = k + m - 1;
  ComplexMatrix prod = mat_mul(t, mat_power(s, static_cast<unsigned>(q)));
  rep.measurements["q"] = q;
  rep.conclusion = {std::string(q == 1 ? "TS" : "TS^" + std::to_string(q)) + " is " + detail::class_label(order, np),
                    order, np, detail::class_residual(prod, c, order, np), false};
  settle(rep, tol, detail::exact_class(std::move(prod), c, order, np));
  return rep;
}

/// Tensor lemma: T in (m, n) under C iff T (x) I and I (x) T are under C (x) D
/// (resp. D (x) C). The conclusion residual is the larger identity residual
/// ||defect(T (x) I) - defect(T) (x) I|| / scale; verdict agreement is measured.
inline VerificationReport check_tensor_lemma(const ComplexMatrix& t, const Conjugation& c, const Conjugation& d,
                                             int m, int n, const TolerancePolicy& tol = {}) {
  const ComplexMatrix id = ComplexMatrix::identity(d.dim());
  const auto base = class_defect(t, &c, m, n);
  const ComplexMatrix left = kron(t, id);
  const ComplexMatrix right = kron(id, t);
  const Conjugation cd = tensor(c, d);
  const Conjugation dc = tensor(d, c);
  const auto dl = class_defect(left, &cd, m, n);
  const auto dr = class_defect(right, &dc, m, n);
  const double rl = frobenius_norm(dl.matrix - kron(base.matrix, id)) / dl.scale;
  const double rr = frobenius_norm(dr.matrix - kron(id, base.matrix)) / dr.scale;

  VerificationReport rep;
  rep.theorem_id = "lem23";
  rep.dims = {t.rows(), d.dim()};
  rep.norms = {spectral_norm(t)};
  const bool v = base.vanishes(tol), vl = dl.vanishes(tol), vr = dr.vanishes(tol);
  rep.measurements["verdict_T"] = v;
  rep.measurements["verdict_T_x_I"] = vl;
  rep.measurements["verdict_I_x_T"] = vr;
  rep.measurements["identity_residual_T_x_I"] = rl;
  rep.measurements["identity_residual_I_x_T"] = rr;
  const bool agree = v == vl && v == vr;
  rep.conclusion = {"T is " + detail::class_label(m, n) + " iff T(x)I and I(x)T are " +
                        detail::class_label(m, n, "C(x)D"),
                    m, n, agree ? std::max(rl, rr) : std::max({rl, rr, 1.0}), false};
  settle(rep, tol);
  return rep;
}

/// T in (m, n1) under C, S in (k, n2) under D, each commuting with its
/// conjugate: T (x) S is in (m + k - 1, max(n1, n2)) under C (x) D.
inline VerificationReport check_tensor(const ComplexMatrix& t, const ComplexMatrix& s, const Conjugation& c,
                                       const Conjugation& d, std::pair<int, int> t_class, std::pair<int, int> s_class,
                                       const TolerancePolicy& tol = {}) {
  const auto [m, n1] = t_class;
  const auto [k, n2] = s_class;
  const int np = std::max(n1, n2);
  VerificationReport rep;
  rep.theorem_id = "th26";
  rep.dims = {t.rows(), s.rows()};
  rep.norms = {spectral_norm(t), spectral_norm(s)};
  rep.require("T(CTC) = (CTC)T", detail::relative_commutator(t, conj_similarity(c, t)), tol);
  rep.require("S(DSD) = (DSD)S", detail::relative_commutator(s, conj_similarity(d, s)), tol);
  rep.require("T is " + detail::class_label(m, n1), detail::class_residual(t, c, m, n1), tol);
  rep.require("S is " + detail::class_label(k, n2, "D"), detail::class_residual(s, d, k, n2), tol);

  const auto lemma_t = check_tensor_lemma(t, c, d, m, n1, tol);
  const auto lemma_s = check_tensor_lemma(s, d, c, k, n2, tol);
  rep.measurements["lemma_residual_T"] = lemma_t.conclusion.residual;
  rep.measurements["lemma_residual_S"] = lemma_s.conclusion.residual;

  const Conjugation cd = tensor(c, d);
  const int order = m + k - 1;
  ComplexMatrix ts = kron(t, s);
  const double res = detail::class_residual(ts, cd, order, np);
  rep.measurements["product_residual"] = res;
  rep.conclusion = {"T(x)S is " + detail::class_label(order, np, "C(x)D"), order, np,
                    std::max({res, lemma_t.conclusion.residual, lemma_s.conclusion.residual}), false};
  settle(rep, tol, detail::exact_class(std::move(ts), cd, order, np));
  return rep;
}

/// sum_{i+j+k=m} m!/(i! j! k!) (T+Q)*^i Q*^j Lambda_k(T) (C T^j C)(C Q^i C),
/// with Lambda_0(T) = I. Requires m >= 2 and TQ = QT.
inline ComplexMatrix multinomial_lambda(const ComplexMatrix& t, const ComplexMatrix& q, const Conjugation& c, int m,
                                        const TolerancePolicy& tol = {}) {
  if (m < 2 || m > kMaxOrder) throw std::invalid_argument("multinomial_lambda: need 2 <= m <= 12");
  require_square(t, "multinomial_lambda");
  if (q.rows() != t.rows() || q.cols() != t.cols() || c.dim() != t.rows()) {
    throw DimensionMismatch("multinomial_lambda: T, Q and C must share a dimension");
  }
  const double gap = detail::relative_commutator(t, q);
  if (gap > tol.rel_zero) throw HypothesisFailed("multinomial_lambda: TQ != QT (relative residual " + std::to_string(gap) + ")");

  const std::size_t d = t.rows();
  std::vector<ComplexMatrix> lam(static_cast<std::size_t>(m) + 1);
  lam[0] = ComplexMatrix::identity(d);
  for (int k = 1; k <= m; ++k) lam[static_cast<std::size_t>(k)] = lambda(t, c, k).matrix;
  const auto sum_star = power_table(adjoint(t + q), static_cast<unsigned>(m));
  const auto q_star = power_table(adjoint(q), static_cast<unsigned>(m));
  std::vector<ComplexMatrix> ctc, cqc;
  for (const auto& p : power_table(t, static_cast<unsigned>(m))) ctc.push_back(conj_similarity(c, p));
  for (const auto& p : power_table(q, static_cast<unsigned>(m))) cqc.push_back(conj_similarity(c, p));

  std::vector<double> fact(static_cast<std::size_t>(m) + 1, 1.0);
  for (int i = 1; i <= m; ++i) fact[static_cast<std::size_t>(i)] = fact[static_cast<std::size_t>(i - 1)] * i;

  ComplexMatrix total(d, d);
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; i + j <= m; ++j) {
      const int k = m - i - j;
      const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      const double coeff = fact[static_cast<std::size_t>(m)] / (fact[ui] * fact[uj] * fact[static_cast<std::size_t>(k)]);
      ComplexMatrix term = mat_mul(mat_mul(sum_star[ui], q_star[uj]), lam[static_cast<std::size_t>(k)]);
      term = mat_mul(mat_mul(term, ctc[uj]), cqc[ui]);
      total += term * complex(coeff, 0.0);
    }
  }
  return total;
}

/// Multinomial identity check: multinomial_lambda(T, Q, C, m) against Lambda_m(T + Q).
inline VerificationReport check_multinomial(const ComplexMatrix& t, const ComplexMatrix& q, const Conjugation& c, int m,
                                            const TolerancePolicy& tol = {}) {
  VerificationReport rep;
  rep.theorem_id = "lem24";
  rep.dims = {t.rows()};
  rep.norms = {spectral_norm(t), spectral_norm(q)};
  rep.measurements["m"] = m;
  if (!rep.require("TQ = QT", detail::relative_commutator(t, q), tol)) {
    rep.conclusion = {"multinomial expansion equals Lambda_m(T+Q)", m, 0, 0.0, false};
    settle(rep, tol);
    return rep;
  }
  const auto direct = lambda(t + q, c, m);
  const ComplexMatrix expanded = multinomial_lambda(t, q, c, m, tol);
  rep.conclusion = {"multinomial expansion equals Lambda_m(T+Q)", m, 0,
                    frobenius_norm(expanded - direct.matrix) / direct.scale, false};
  settle(rep, tol);
  return rep;
}

/// Nilpotent perturbation: T in (m, n) (n = 0 unless `quasi`), Q nilpotent of
/// measured order p commuting with T; T + Q is in (m + 2p - 2, n + p) (plain
/// variant: (m + 2p - 2, 0)). The smallest order that actually holds is recorded
/// as measured_minimal_order next to bound_order.
inline VerificationReport check_nilpotent_perturbation(const ComplexMatrix& t, const ComplexMatrix& q,
                                                       const Conjugation& c, int m, int n, bool quasi,
                                                       const TolerancePolicy& tol = {}) {
  require_square(t, "check_nilpotent_perturbation");
  if (q.rows() != t.rows() || q.cols() != t.cols()) throw DimensionMismatch("check_nilpotent_perturbation: T and Q differ in size");
  const int n_in = quasi ? n : 0;
  VerificationReport rep;
  rep.theorem_id = quasi ? "th28" : "th27";
  rep.variant = quasi ? "quasi" : "plain";
  rep.dims = {t.rows()};
  rep.norms = {spectral_norm(t), spectral_norm(q)};
  rep.require("TQ = QT", detail::relative_commutator(t, q), tol);
  if (quasi) {
    rep.require("T(CQC) = (CQC)T", detail::relative_commutator(t, conj_similarity(c, q)), tol);
    rep.require("T(CTC) = (CTC)T", detail::relative_commutator(t, conj_similarity(c, t)), tol);
  }
  const auto p = measure_nilpotent_order(q, tol);
  rep.require_flag("Q nilpotent", p.has_value());
  rep.require("T is " + detail::class_label(m, n_in), detail::class_residual(t, c, m, n_in), tol);
  const int pp = p.value_or(1);
  const int bound = m + 2 * pp - 2;
  const int n_out = quasi ? n + pp : 0;
  rep.measurements["measured_p"] = pp;
  rep.measurements["bound_order"] = bound;

  ComplexMatrix sum = t + q;
  if (bound > kMaxOrder || n_out > kMaxOrder) {
    throw std::invalid_argument("check_nilpotent_perturbation: bound order " + std::to_string(bound) + " exceeds 12");
  }
  int minimal = -1;
  for (int k = 1; k <= bound; ++k) {
    if (in_class(sum, &c, k, n_out, tol)) {
      minimal = k;
      break;
    }
  }
  rep.measurements["measured_minimal_order"] = minimal;
  rep.conclusion = {"T+Q is " + detail::class_label(bound, n_out), bound, n_out,
                    detail::class_residual(sum, c, bound, n_out), false};
  settle(rep, tol, detail::exact_class(std::move(sum), c, bound, n_out));
  return rep;
}

}  // namespace qik
