#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qik/io.hpp"

namespace qik::cli {

enum ExitCode : int { kTrue = 0, kFalse = 1, kInputError = 2 };

struct Options {
  std::string command;
  std::string matrix;
  std::string conj = "entrywise";
  std::string theorem;
  std::string out_dir;
  std::string format = "table";
  std::string kind = "assembled";
  std::string sequence_file;
  std::string x_file;
  int m = 1, n = 0, k = 1, mmax = 4, nmax = 3, trials = 200, r = 1, s = 0, l = 0, J = 8, dim = 4;
  unsigned jobs = 1;
  std::uint64_t seed = 0;
  std::optional<double> tol_rel;
  bool list = false;
};

/// Everything a command needs, loaded before any computation.
struct Inputs {
  std::optional<io::MatrixFile> matrix;
  std::optional<Conjugation> conj;  // empty for --conj none
  std::string conj_kind = "none";
  std::optional<MomentSequence> sequence;
  std::optional<ComplexVector> x;
};

struct Result {
  io::json record;
  std::string table;
  int code = kTrue;
};

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline std::string num(const complex& z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g%+.6gi", z.real(), z.imag());
  return buf;
}

inline std::string yes_no(bool b) { return b ? "true" : "false"; }

inline std::string matrix_table(const ComplexMatrix& a) {
  std::ostringstream os;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    os << "  [";
    for (std::size_t j = 0; j < a.cols(); ++j) os << (j ? ", " : "") << num(a(i, j));
    os << "]\n";
  }
  return os.str();
}

inline Inputs load_inputs(const Options& o) {
  Inputs in;
  if (!o.matrix.empty()) in.matrix = io::load_matrix(o.matrix);
  if (!o.sequence_file.empty()) in.sequence = io::sequence_from_json(io::read_json_file(o.sequence_file));
  if (!o.x_file.empty()) in.x = io::sequence_from_json(io::read_json_file(o.x_file)).values;

  const std::size_t dim = in.matrix ? in.matrix->matrix.rows() : 0;
  if (o.conj == "none") {
    in.conj_kind = "none";
  } else if (o.conj == "entrywise" || o.conj == "flip") {
    in.conj_kind = o.conj;
    if (in.matrix) in.conj = o.conj == "flip" ? Conjugation::flip(dim) : Conjugation::entrywise(dim);
  } else if (o.conj.rfind("custom:", 0) == 0) {
    in.conj_kind = "custom";
    in.conj = io::load_conjugation(o.conj.substr(7));
  } else {
    throw ParseError("--conj must be entrywise, flip, none or custom:<file>");
  }
  if (in.matrix && !in.matrix->matrix.is_square()) {
    throw DimensionMismatch("matrix must be square, got " + in.matrix->matrix.shape());
  }
  if (in.matrix && in.conj && in.conj->dim() != dim) {
    throw DimensionMismatch("conjugation of dim " + std::to_string(in.conj->dim()) + " does not match matrix " +
                            in.matrix->matrix.shape());
  }
  if (in.matrix && in.x && in.x->size() != dim) throw DimensionMismatch("vector length does not match matrix");
  return in;
}

inline const ComplexMatrix& need_matrix(const Inputs& in, const char* cmd) {
  if (!in.matrix) throw ParseError(std::string(cmd) + " requires --matrix");
  return in.matrix->matrix;
}

inline const Conjugation* conj_ptr(const Inputs& in) { return in.conj ? &*in.conj : nullptr; }

inline std::string class_name(int m, int n, bool with_c) {
  const std::string base = "(" + std::to_string(m) + (with_c ? ",C)" : ")") + "-isometric";
  return n == 0 ? base : std::to_string(n) + "-quasi-" + base;
}

inline std::string report_table(const VerificationReport& r) {
  std::ostringstream os;
  os << r.theorem_id << (r.variant.empty() ? "" : " [" + r.variant + "]") << ": " << to_string(r.outcome) << "\n";
  for (const auto& h : r.hypotheses) {
    os << "  hypothesis  " << (h.pass ? "ok  " : "FAIL") << "  " << sci(h.residual) << "  " << h.name << "\n";
  }
  os << "  conclusion  " << (r.conclusion.pass ? "ok  " : "FAIL") << "  " << sci(r.conclusion.residual) << "  "
     << r.conclusion.statement << "\n";
  for (const auto& [k, v] : r.measurements) os << "  " << k << " = " << v << "\n";
  if (r.rechecked_4x) os << "  rechecked at 4x tolerance; exact path: " << r.exact_path << "\n";
  return os.str();
}

inline int report_code(const VerificationReport& r) {
  switch (r.outcome) {
    case Outcome::Pass: return kTrue;
    case Outcome::CounterExample: return kFalse;
    case Outcome::Inconclusive: return kInputError;
  }
  return kInputError;
}

}  // namespace detail

inline Result cmd_check(const Options& o, const Inputs& in, const TolerancePolicy& tol) {
  const ComplexMatrix& t = detail::need_matrix(in, "check");
  const auto* c = detail::conj_ptr(in);
  const auto d = class_defect(t, c, o.m, o.n);
  bool verdict = d.vanishes(tol);
  std::optional<bool> exact_verdict;
  if (in.matrix->exact) exact_verdict = exact::in_class(t, c, o.m, o.n);
  if (exact_verdict) verdict = *exact_verdict;

  Result res;
  res.record = io::json{{"m", o.m}, {"n", o.n}, {"conjugation", in.conj_kind}, {"verdict", verdict},
                        {"residual", d.residual()}, {"scale", d.scale}};
  res.record["exact_verdict"] = exact_verdict ? io::json(*exact_verdict) : io::json(nullptr);
  res.record["defect"] = io::matrix_to_json(d.matrix);
  std::ostringstream os;
  os << "class      " << detail::class_name(o.m, o.n, c != nullptr) << "\n"
     << "conj       " << in.conj_kind << "\n"
     << "residual   " << detail::sci(d.residual()) << " (scale " << detail::sci(d.scale) << ")\n";
  if (exact_verdict) os << "exact      " << detail::yes_no(*exact_verdict) << "\n";
  os << "verdict    " << detail::yes_no(verdict) << "\n";
  res.table = os.str();
  res.code = verdict ? kTrue : kFalse;
  return res;
}

inline Result cmd_classify(const Options& o, const Inputs& in, const TolerancePolicy& tol) {
  const ComplexMatrix& t = detail::need_matrix(in, "classify");
  const auto* c = detail::conj_ptr(in);
  std::optional<ClassificationReport> rep;
  if (in.matrix->exact) {
    try {
      rep = classify_exact(t, c, o.mmax, o.nmax);
    } catch (const std::invalid_argument&) {
      // symbol not integral: fall back to floating point
    }
  }
  if (!rep) rep = classify(t, c, o.mmax, o.nmax, tol);

  Result res;
  res.record = io::classification_to_json(*rep);
  res.record["conjugation"] = in.conj_kind;
  std::ostringstream os;
  os << "verdicts (rows m = 1.." << o.mmax << ", columns n = 0.." << o.nmax << ")" << (rep->exact ? " [exact]" : "")
     << "\n";
  os << "     ";
  for (int n = 0; n <= o.nmax; ++n) os << "  n=" << n;
  os << "\n";
  bool any = false;
  for (int m = 1; m <= o.mmax; ++m) {
    os << "m=" << m << (m < 10 ? "  " : " ");
    for (int n = 0; n <= o.nmax; ++n) {
      const bool v = rep->at(m, n).verdict;
      any = any || v;
      os << (n >= 10 ? "    " : "   ") << (v ? "T" : ".");
    }
    os << "\n";
  }
  os << "minimal pairs:";
  if (rep->minimal_pairs.empty()) os << " none";
  for (const auto& [m, n] : rep->minimal_pairs) os << " (" << m << "," << n << ")";
  os << "\ncommutes with CTC: " << detail::yes_no(rep->commutes_with_ctc) << "\n";
  res.table = os.str();
  res.code = any ? kTrue : kFalse;
  return res;
}

inline Result cmd_decompose(const Options& o, const Inputs& in, const TolerancePolicy& tol) {
  const ComplexMatrix& t = detail::need_matrix(in, "decompose");
  if (o.n < 1) throw std::invalid_argument("decompose requires --n >= 1");
  const Decomposition dec = decompose(t, o.n, tol);
  Result res;
  res.record = io::decomposition_to_json(dec);
  std::ostringstream os;
  os << "rank of T^" << o.n << ": " << dec.rank << " of " << dec.dim() << (dec.dense_range() ? " (dense)" : "") << "\n"
     << "T1:\n" << detail::matrix_table(dec.t1) << "T2:\n" << detail::matrix_table(dec.t2) << "T3:\n"
     << detail::matrix_table(dec.t3) << "lower-left residual: " << detail::sci(dec.residual_lower_left) << "\n";
  if (in.conj) {
    const ComplexMatrix kernel = dec.kernel_basis();
    try {
      const auto split = split_along(*in.conj, dec.range_basis(), &kernel);
      res.record["conjugation_split"] = io::json{{"splits", true},
                                                 {"off_block_residual", split.off_block_residual},
                                                 {"C1", io::matrix_to_json(split.first.symbol())},
                                                 {"C2", io::matrix_to_json(split.second.symbol())}};
      os << "conjugation splits (off-block " << detail::sci(split.off_block_residual) << ")\n";
      if (dec.rank > 0) {
        const double res1 = lambda(dec.t1, split.first, std::max(o.m, 1)).residual();
        res.record["lambda_T1_residual"] = res1;
        os << "Lambda_" << std::max(o.m, 1) << "(T1) residual: " << detail::sci(res1) << "\n";
      }
    } catch (const NotReducing& e) {
      res.record["conjugation_split"] = io::json{{"splits", false}, {"off_block_residual", e.residual()}};
      os << "conjugation does not split (off-block " << detail::sci(e.residual()) << ")\n";
    }
  }
  res.table = os.str();
  return res;
}

inline Result cmd_spectrum(const Options&, const Inputs& in, const TolerancePolicy& tol) {
  const ComplexMatrix& t = detail::need_matrix(in, "spectrum");
  const auto rep = spectrum_report(t, tol);
  const auto nm = norms(t);
  Result res;
  io::json ev = io::json::array();
  for (const auto& z : rep.eigenvalues) ev.push_back(io::complex_to_json(z));
  res.record = io::json{{"eigenvalues", std::move(ev)},
                        {"spectral_radius", rep.spectral_radius},
                        {"spectral_norm", nm.spectral},
                        {"frobenius_norm", nm.frobenius}};
  std::ostringstream os;
  os << "eigenvalues:\n";
  for (const auto& z : rep.eigenvalues) os << "  " << detail::num(z) << "\n";
  os << "spectral radius: " << rep.spectral_radius << "\nnorm: " << nm.spectral << "\n";
  res.table = os.str();
  return res;
}

inline Result cmd_construct(const Options& o, const Inputs&, const TolerancePolicy& tol) {
  if (o.dim < 1) throw std::invalid_argument("construct requires --dim >= 1");
  const auto inst = gen_random_instance(parse_instance_kind(o.kind), static_cast<std::size_t>(o.dim), o.seed, o.m, o.n);
  const bool verdict = in_class(inst.t, &inst.c, inst.m, inst.n, tol);
  Result res;
  res.record = io::json{{"kind", to_string(inst.kind)},
                        {"seed", inst.seed},
                        {"declared", io::json{{"m", inst.m}, {"n", inst.n}}},
                        {"declared_verdict", verdict},
                        {"matrix", io::matrix_to_json(inst.t)},
                        {"conjugation", io::conjugation_to_json(inst.c)}};
  std::ostringstream os;
  os << to_string(inst.kind) << " instance, dim " << o.dim << ", seed " << o.seed << "\n"
     << "declared class " << detail::class_name(inst.m, inst.n, true) << ": " << detail::yes_no(verdict) << "\n"
     << "T:\n" << detail::matrix_table(inst.t);
  res.table = os.str();
  res.code = verdict ? kTrue : kFalse;
  return res;
}

inline Result cmd_verify(const Options& o, const Inputs& in, const TolerancePolicy& tol) {
  Result res;
  if (o.list) {
    io::json ids = io::json::array();
    std::ostringstream os;
    for (const auto& s : theorem_catalog()) {
      ids.push_back(io::json{{"id", s.id}, {"description", s.description}});
      os << s.id << (s.id.size() < 5 ? "   " : "  ") << s.description << "\n";
    }
    res.record = io::json{{"theorems", std::move(ids)}};
    res.table = os.str();
    return res;
  }
  if (o.theorem.empty()) throw ParseError("verify requires --theorem or --list");
  if (!is_known_theorem(o.theorem)) throw ParseError("unknown theorem '" + o.theorem + "' (see verify --list)");

  if (in.matrix) {
    if (!in.conj) throw ParseError("verify on a matrix needs a conjugation");
    const ComplexMatrix& t = in.matrix->matrix;
    VerificationReport rep;
    if (o.theorem == "th22") {
      rep = check_power_theorem(t, *in.conj, o.m, o.n, o.k, tol);
    } else if (o.theorem == "th24" || o.theorem == "cor22") {
      if (o.s < 1 || o.l < 1) throw ParseError(o.theorem + " on a matrix needs --r, --s, --m and --l");
      rep = check_power_gcd(t, *in.conj, o.r, o.s, o.m, o.l, tol);
    } else if (o.theorem == "pro21") {
      rep = check_order_escalation(t, *in.conj, o.m, o.n, 2, tol);
    } else if (o.theorem == "lem21") {
      rep = check_commuting_escalation(t, *in.conj, o.m, o.n, 3, tol);
    } else if (o.theorem == "cor21") {
      rep = check_dense_range(t, *in.conj, o.m, o.n, tol);
    } else if (o.theorem == "th23") {
      rep = check_normaloid_theorem(t, *in.conj, o.m, o.n, tol);
    } else {
      throw ParseError("verify --matrix supports th22, th23, th24, cor21, cor22, lem21 and pro21");
    }
    res.record = io::report_to_json(rep);
    res.table = detail::report_table(rep);
    res.code = detail::report_code(rep);
    return res;
  }

  if (o.trials < 1) throw std::invalid_argument("verify requires --trials >= 1");
  const SuiteSummary sum = run_suite(o.theorem, o.trials, o.seed, tol, o.jobs);
  res.record = io::summary_to_json(sum);
  std::ostringstream os;
  os << sum.theorem_id << ": " << sum.passed << "/" << sum.trials << " pass, " << sum.inconclusive << " inconclusive, "
     << sum.counterexamples << " counterexamples (seed " << sum.seed << ")\n"
     << "max hypothesis residual  " << detail::sci(sum.max_hypothesis_residual) << "\n"
     << "max conclusion residual  " << detail::sci(sum.max_conclusion_residual) << "\n";
  for (std::size_t i = 0; i < sum.reports.size(); ++i) {
    if (sum.reports[i].outcome != Outcome::Pass) os << "trial " << i << ":\n" << detail::report_table(sum.reports[i]);
  }
  res.table = os.str();
  res.code = sum.counterexamples > 0 ? kFalse : sum.inconclusive > 0 ? kInputError : kTrue;
  return res;
}

inline Result cmd_sequence(const Options& o, const Inputs& in, const TolerancePolicy& tol) {
  if (o.m < 1 || o.r < 1) throw std::invalid_argument("sequence requires --m >= 1 and --r >= 1");
  const bool pair = o.l > 0 || o.s > 0;
  if (pair && (o.l < 1 || o.s < 1)) throw std::invalid_argument("sequence: --l and --s go together");
  if (o.J < 0) throw std::invalid_argument("sequence requires --J >= 0");

  MomentSequence a;
  if (in.sequence) {
    a = *in.sequence;
  } else {
    const ComplexMatrix& t = detail::need_matrix(in, "sequence");
    if (!in.conj) throw ParseError("sequence on a matrix needs a conjugation");
    ComplexVector x;
    if (in.x) {
      x = *in.x;
    } else {
      Rng rng(o.seed);
      x = gaussian_vector(rng, t.rows());
    }
    const int len = std::max({o.m * o.r, o.l * o.s, std::gcd(o.r, std::max(o.s, 1)) * std::max(o.m, o.l)}) + o.J;
    a = moments(t, *in.conj, std::span<const complex>(x), len);
  }

  Result res;
  std::ostringstream os;
  if (pair) {
    const auto rep = gcd_min_reduction(a, {o.m, o.r}, {o.l, o.s}, o.J, tol);
    res.record = io::report_to_json(rep);
    res.table = detail::report_table(rep);
    res.code = detail::report_code(rep);
  } else {
    const double resid = recurrence_residual(a, o.m, o.r, o.J);
    const bool ok = resid <= tol.rel_zero;
    res.record = io::json{{"m", o.m}, {"r", o.r}, {"J", o.J}, {"residual", resid}, {"satisfied", ok}};
    os << "order " << o.m << " step " << o.r << " recurrence on j <= " << o.J << ": " << detail::yes_no(ok)
       << " (residual " << detail::sci(resid) << ")\n";
    res.table = os.str();
    res.code = ok ? kTrue : kFalse;
  }
  res.record["values"] = io::sequence_to_json(a);
  return res;
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"qik: (m,C)-isometry classification and theorem checks"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--tol-rel", o.tol_rel, "relative zero tolerance (default 1e-9 or QIK_DEFAULT_TOL)");
  app.add_option("--format", o.format, "stdout format")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--out", o.out_dir, "write <command>.json and <command>.txt into this directory");

  auto add_matrix = [&o](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--matrix", o.matrix, "matrix JSON file")->check(CLI::ExistingFile);
    if (required) opt->required();
    sub->add_option("--conj", o.conj, "entrywise | flip | none | custom:<file>");
  };

  auto* check = app.add_subcommand("check", "membership in the class (m, n)");
  add_matrix(check, true);
  check->add_option("--m", o.m, "isometric order")->required()->check(CLI::Range(1, kMaxOrder));
  check->add_option("--n", o.n, "quasi order (0 = plain)")->check(CLI::Range(0, kMaxOrder));

  auto* classify_cmd = app.add_subcommand("classify", "verdict grid over (m, n)");
  add_matrix(classify_cmd, true);
  classify_cmd->add_option("--mmax", o.mmax)->check(CLI::Range(1, kMaxOrder));
  classify_cmd->add_option("--nmax", o.nmax)->check(CLI::Range(0, kMaxOrder));

  auto* decompose_cmd = app.add_subcommand("decompose", "block form on R(T^n) + N(T*^n)");
  add_matrix(decompose_cmd, true);
  decompose_cmd->add_option("--n", o.n)->required()->check(CLI::Range(1, kMaxOrder));
  decompose_cmd->add_option("--m", o.m, "order used for the T1 check when --conj is given");

  auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues and spectral radius");
  add_matrix(spectrum_cmd, true);

  auto* construct = app.add_subcommand("construct", "generate an instance of a declared class");
  construct->add_option("--kind", o.kind)->check(CLI::IsMember({"unitary", "scalar_plus_nilpotent", "assembled", "tensor"}));
  construct->add_option("--dim", o.dim)->check(CLI::Range(1, 64));
  construct->add_option("--seed", o.seed);
  construct->add_option("--m", o.m)->check(CLI::Range(1, kMaxOrder));
  construct->add_option("--n", o.n)->check(CLI::Range(0, kMaxOrder));

  auto* verify = app.add_subcommand("verify", "run a theorem suite, or check one matrix");
  verify->add_flag("--list", o.list, "list theorem identifiers");
  verify->add_option("--theorem", o.theorem);
  verify->add_option("--trials", o.trials);
  verify->add_option("--seed", o.seed);
  verify->add_option("--jobs", o.jobs, "worker threads");
  add_matrix(verify, false);
  verify->add_option("--m", o.m)->check(CLI::Range(1, kMaxOrder));
  verify->add_option("--n", o.n)->check(CLI::Range(0, kMaxOrder));
  verify->add_option("--k", o.k)->check(CLI::Range(1, 64));
  verify->add_option("--r", o.r)->check(CLI::Range(1, 64));
  verify->add_option("--s", o.s)->check(CLI::Range(1, 64));
  verify->add_option("--l", o.l)->check(CLI::Range(1, kMaxOrder));

  auto* sequence = app.add_subcommand("sequence", "binomial recurrences on a sequence or operator moments");
  add_matrix(sequence, false);
  sequence->add_option("--sequence", o.sequence_file, "JSON list of [re, im]")->check(CLI::ExistingFile);
  sequence->add_option("--x", o.x_file, "start vector for moments (default: random from --seed)")->check(CLI::ExistingFile);
  sequence->add_option("--seed", o.seed);
  sequence->add_option("--m", o.m);
  sequence->add_option("--r", o.r);
  sequence->add_option("--l", o.l);
  sequence->add_option("--s", o.s);
  sequence->add_option("--J", o.J);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kTrue : kInputError;
  }
  o.command = app.get_subcommands().front()->get_name();

  try {
    TolerancePolicy tol = TolerancePolicy::from_environment();
    if (o.tol_rel) tol.rel_zero = *o.tol_rel;
    tol.validate();

    const Inputs in = detail::load_inputs(o);
    Result res;
    if (o.command == "check") res = cmd_check(o, in, tol);
    else if (o.command == "classify") res = cmd_classify(o, in, tol);
    else if (o.command == "decompose") res = cmd_decompose(o, in, tol);
    else if (o.command == "spectrum") res = cmd_spectrum(o, in, tol);
    else if (o.command == "construct") res = cmd_construct(o, in, tol);
    else if (o.command == "verify") res = cmd_verify(o, in, tol);
    else res = cmd_sequence(o, in, tol);

    io::json doc = io::envelope(o.command, tol);
    if (!o.matrix.empty()) doc["inputs"]["matrix"] = std::filesystem::path(o.matrix).filename().string();
    if (in.matrix) doc["inputs"]["exact"] = in.matrix->exact;
    doc["result"] = std::move(res.record);
    doc["exit_code"] = res.code;
    const std::string json_text = doc.dump(2) + "\n";

    if (!o.out_dir.empty()) {
      std::filesystem::create_directories(o.out_dir);
      const auto base = std::filesystem::path(o.out_dir) / o.command;
      io::write_file(base.string() + ".json", json_text);
      io::write_file(base.string() + ".txt", res.table);
    }
    out << (o.format == "json" ? json_text : res.table);
    return res.code;
  } catch (const ResidualError& e) {
    err << "error: " << e.what() << " (residual " << e.residual() << ")\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kInputError;
}

}  // namespace qik::cli
