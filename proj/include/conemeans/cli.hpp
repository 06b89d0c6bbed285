#pragma once

// Command runner behind the conemeans executable. run() is a pure function
// of its RunConfig: the same config yields the same report bytes.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "conemeans/cone_geometry.hpp"
#include "conemeans/io.hpp"
#include "conemeans/means.hpp"
#include "conemeans/preserver_lab.hpp"
#include "conemeans/suites.hpp"
#include "conemeans/version.hpp"

namespace conemeans {

enum class Command { Mean, Distance, Strength, Solve, Verify, Suite, GapSearch };

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitInputError = 2;

[[nodiscard]] inline const char* to_string(Command c) {
  switch (c) {
    case Command::Mean: return "mean";
    case Command::Distance: return "distance";
    case Command::Strength: return "strength";
    case Command::Solve: return "solve";
    case Command::Verify: return "verify";
    case Command::Suite: return "suite";
    case Command::GapSearch: return "gap-search";
  }
  return "?";
}

[[nodiscard]] inline std::optional<Command> parse_command(const std::string& s) {
  for (Command c : {Command::Mean, Command::Distance, Command::Strength, Command::Solve, Command::Verify,
                    Command::Suite, Command::GapSearch}) {
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

struct RunConfig {
  Command command = Command::Mean;
  double p = 0.5;
  MeanFamily family = MeanFamily::Conventional;
  Index dim = 3;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  ToleranceConfig tol;
  std::vector<std::string> inputs;
  std::string output;    ///< empty: standard output
  std::string name;      ///< suite name
  std::string function;  ///< named Kubo-Ando mean for `mean`
  std::string form;      ///< preserver kind for `verify`; empty picks the family's form
  bool conjugate = false;
  bool strict = false;

  void validate() const {
    tol.validate();
    if (!std::isfinite(p) || p == 0.0) throw InvalidExponent("--p must be finite and nonzero");
    if (trials < 1) throw DomainError("--trials must be at least 1");
    if (dim < 1) throw DomainError("--dim must be at least 1");
    if (family == MeanFamily::KuboAndo && (p < -1.0 || p > 1.0)) {
      throw InvalidExponent("the Kubo-Ando family needs p in [-1, 1]");
    }
  }
};

struct RunResult {
  int exit_code = kExitOk;
  Json report;
};

namespace detail {

inline const char* family_flag(MeanFamily f) { return f == MeanFamily::KuboAndo ? "ka" : "conv"; }

inline Json config_json(const RunConfig& c) {
  Json j = {{"command", to_string(c.command)},
            {"p", c.p},
            {"family", family_flag(c.family)},
            {"dim", c.dim},
            {"trials", c.trials},
            {"seed", c.seed},
            {"tol", to_json(c.tol)},
            {"inputs", c.inputs}};
  if (!c.name.empty()) j["name"] = c.name;
  if (!c.function.empty()) j["function"] = c.function;
  if (!c.form.empty()) j["form"] = c.form;
  j["conjugate"] = c.conjugate;
  j["strict"] = c.strict;
  return j;
}

inline const char* error_kind(const Error& e) {
  if (dynamic_cast<const InputParseError*>(&e)) return "InputParseError";
  if (dynamic_cast<const NonHermitianInput*>(&e)) return "NonHermitianInput";
  if (dynamic_cast<const NotPositiveDefinite*>(&e)) return "NotPositiveDefinite";
  if (dynamic_cast<const NotPositiveSemidefinite*>(&e)) return "NotPositiveSemidefinite";
  if (dynamic_cast<const DimensionMismatch*>(&e)) return "DimensionMismatch";
  if (dynamic_cast<const SingularPower*>(&e)) return "SingularPower";
  if (dynamic_cast<const SingularT*>(&e)) return "SingularT";
  if (dynamic_cast<const InvalidExponent*>(&e)) return "InvalidExponent";
  if (dynamic_cast<const BoundaryDivergence*>(&e)) return "BoundaryDivergence";
  if (dynamic_cast<const ZeroVector*>(&e)) return "ZeroVector";
  if (dynamic_cast<const EmptyProbeSet*>(&e)) return "EmptyProbeSet";
  if (dynamic_cast<const IncompatibleForm*>(&e)) return "IncompatibleForm";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  return "Error";
}

inline void need_inputs(const RunConfig& c, std::size_t n, const char* usage) {
  if (c.inputs.size() != n) {
    throw InputParseError(std::string(to_string(c.command)) + " expects " + usage);
  }
}

inline PsdMatrix read_psd(const std::string& path, const ToleranceConfig& tol) {
  return PsdMatrix(read_matrix_file(path), tol);
}

inline Json spectrum_json(const PsdMatrix& m) {
  Json v = Json::array();
  for (Index i = 0; i < m.dim(); ++i) v.push_back(m.eigenvalues()[i]);
  return v;
}

inline int run_mean(const RunConfig& c, Json& out) {
  need_inputs(c, 2, "two matrix files A B");
  const PsdMatrix a = read_psd(c.inputs[0], c.tol);
  const PsdMatrix b = read_psd(c.inputs[1], c.tol);
  PsdMatrix m = PsdMatrix::zero(1);
  if (!c.function.empty()) {
    if (c.family != MeanFamily::KuboAndo) throw DomainError("--function selects a Kubo-Ando mean; use --family ka");
    m = ka_mean_from_function(a, b, representing_function_by_name(c.function), c.tol);
  } else {
    m = power_mean(a, b, MeanSpec(c.p, c.family), c.tol);
  }
  Json flags = Json::array();
  if (!a.is_invertible(c.tol) || !b.is_invertible(c.tol)) flags.push_back("singular-operand");
  out["result"] = to_json(m.matrix());
  out["eigenvalues"] = spectrum_json(m);
  out["flags"] = std::move(flags);
  return kExitOk;
}

inline int run_distance(const RunConfig& c, Json& out) {
  need_inputs(c, 2, "two positive definite matrix files A B");
  const PdMatrix a(read_psd(c.inputs[0], c.tol), c.tol);
  const PdMatrix b(read_psd(c.inputs[1], c.tol), c.tol);
  out["thompson_distance"] = thompson_distance(a, b);
  out["log_form"] = thompson_distance_log_form(a, b);
  out["sup_ratio_ab"] = sup_ratio(a, b);
  out["sup_ratio_ba"] = sup_ratio(b, a);
  return kExitOk;
}

inline int run_strength(const RunConfig& c, Json& out) {
  need_inputs(c, 2, "a matrix file A and a vector file phi");
  const PsdMatrix a = read_psd(c.inputs[0], c.tol);
  const RankOneProjection p = rank_one_projection(read_vector_file(c.inputs[1]));
  const StrengthValue s = strength(a, p, c.tol);
  out["strength"] = s.value;
  out["in_range"] = s.in_range;
  return kExitOk;
}

inline int run_solve(const RunConfig& c, Json& out) {
  need_inputs(c, 2, "two positive definite matrix files A B");
  const PdMatrix a(read_psd(c.inputs[0], c.tol), c.tol);
  const PdMatrix b(read_psd(c.inputs[1], c.tol), c.tol);
  const std::optional<PsdMatrix> x = c.family == MeanFamily::KuboAndo
                                         ? solve_ka_equation(a, b, c.p, c.tol)
                                         : solve_conventional_equation(a, b, c.p, c.strict, c.tol);
  out["solvable"] = x.has_value();
  out["order_margin"] = c.tol.order;
  if (x) {
    const Matrix target = b.matrix() / std::pow(2.0, 1.0 / c.p);
    const double residual = (power_mean(a, *x, MeanSpec(c.p, c.family), c.tol).matrix() - target).norm();
    out["solution"] = to_json(x->matrix());
    out["round_trip_residual"] = finite(residual, "round-trip residual");
  }
  return kExitOk;
}

inline PreserverKind preserver_kind(const RunConfig& c) {
  if (c.form.empty()) {
    return c.family == MeanFamily::KuboAndo ? PreserverKind::Congruence : PreserverKind::PowerCongruence;
  }
  for (PreserverKind k : {PreserverKind::Congruence, PreserverKind::PowerCongruence, PreserverKind::JordanUnitary,
                          PreserverKind::JordanTranspose}) {
    if (c.form == to_string(k)) return k;
  }
  throw InputParseError("unknown preserver form '" + c.form + "'");
}

inline int run_verify(const RunConfig& c, Json& out) {
  const MeanSpec spec(c.p, c.family);
  const PreserverKind kind = preserver_kind(c);
  const double e = spec.family() == MeanFamily::KuboAndo ? 1.0 : spec.q();
  PreserverForm form;
  switch (kind) {
    case PreserverKind::Congruence:
      need_inputs(c, 1, "a matrix file T");
      form = PreserverForm::congruence(read_matrix_file(c.inputs[0]), c.conjugate);
      break;
    case PreserverKind::PowerCongruence:
      need_inputs(c, 1, "a matrix file T");
      form = PreserverForm::power_congruence(read_matrix_file(c.inputs[0]), e, c.conjugate);
      break;
    case PreserverKind::JordanUnitary:
    case PreserverKind::JordanTranspose: {
      need_inputs(c, 2, "a unitary matrix file U and a positive definite matrix file D");
      PdMatrix d(read_psd(c.inputs[1], c.tol), c.tol);
      form = PreserverForm::jordan(kind, read_matrix_file(c.inputs[0]), std::move(d), e, c.tol);
      break;
    }
  }
  if (form.t.rows() != form.t.cols()) throw DimensionMismatch("T must be square");
  if (singular_value_ratio(form.t) < c.tol.rank_rel) throw SingularT("T is not invertible");
  const VerificationReport r = verify_preserver(form, spec, c.trials, c.seed, c.tol);
  out["form"] = to_string(form.kind);
  out["exponent"] = form.effective_exponent();
  out["expected_to_preserve"] = preserver_pairing(form, spec).value_or(false);
  out["trials"] = r.trials;
  out["max_residual"] = finite(r.max_residual, "verification residual");
  out["failures"] = r.failures.size();
  out["passed"] = r.passed;
  Json witnesses = Json::array();
  if (!r.passed && r.witness) {
    witnesses.push_back({{"label", "worst pair"},
                         {"residual", finite(r.witness->residual, "witness residual")},
                         {"scale", r.witness->scale},
                         {"matrices", {{"A", to_json(r.witness->a)}, {"B", to_json(r.witness->b)}}}});
  }
  out["witnesses"] = std::move(witnesses);
  return r.passed ? kExitOk : kExitFailed;
}

inline int run_suite_command(const RunConfig& c, Json& out) {
  if (!is_suite_name(c.name)) throw InputParseError("unknown suite '" + c.name + "'");
  SuiteConfig sc;
  sc.name = c.name;
  sc.p = c.p;
  sc.dim = c.dim;
  sc.trials = c.trials;
  sc.seed = c.seed;
  sc.tol = c.tol;
  const SuiteReport r = run_suite(sc);
  const Json body = to_json(r);
  for (const auto& [key, value] : body.items()) out[key] = value;
  return r.passed ? kExitOk : kExitFailed;
}

inline int run_gap_search(const RunConfig& c, Json& out) {
  const GapRecord g = gap_search(c.dim, c.p, c.trials, c.seed, c.tol);
  const double threshold = 100.0 * c.tol.eq;
  const PsdMatrix conv = conventional_mean(g.a, g.b, c.p, c.tol);
  const PsdMatrix ka = ka_power_mean(g.a, g.b, c.p, c.tol);
  out["gap"] = finite(g.gap, "gap");
  out["threshold"] = threshold;
  out["exceeds_threshold"] = g.gap > threshold;
  out["recomputed_gap"] = finite((conv.matrix() - ka.matrix()).norm(), "gap");
  out["commutator_norm"] = g.commutator_norm;
  out["witness"] = {{"A", to_json(g.a.matrix())},
                    {"B", to_json(g.b.matrix())},
                    {"conventional_mean", to_json(conv.matrix())},
                    {"kubo_ando_mean", to_json(ka.matrix())}};
  return kExitOk;
}

}  // namespace detail

/// Runs one command. Library and input errors become an "error" object in
/// the report with exit code 2; failed suites and verifications give 1.
[[nodiscard]] inline RunResult run(const RunConfig& config) {
  RunResult result;
  result.report = {{"version", kVersion}, {"config", detail::config_json(config)}};
  Json& out = result.report;
  try {
    config.validate();
    switch (config.command) {
      case Command::Mean: result.exit_code = detail::run_mean(config, out); break;
      case Command::Distance: result.exit_code = detail::run_distance(config, out); break;
      case Command::Strength: result.exit_code = detail::run_strength(config, out); break;
      case Command::Solve: result.exit_code = detail::run_solve(config, out); break;
      case Command::Verify: result.exit_code = detail::run_verify(config, out); break;
      case Command::Suite: result.exit_code = detail::run_suite_command(config, out); break;
      case Command::GapSearch: result.exit_code = detail::run_gap_search(config, out); break;
    }
  } catch (const Error& e) {
    result.report = {{"version", kVersion},
                     {"config", detail::config_json(config)},
                     {"error", {{"type", detail::error_kind(e)}, {"message", e.what()}}}};
    result.exit_code = kExitInputError;
  }
  return result;
}

[[nodiscard]] inline std::string render(const Json& report) { return report.dump(2) + "\n"; }

/// run() followed by writing the report to config.output or `fallback`.
inline int run_and_write(const RunConfig& config, std::ostream& fallback) {
  const RunResult r = run(config);
  const std::string text = render(r.report);
  if (config.output.empty()) {
    fallback << text;
    return r.exit_code;
  }
  std::ofstream file(config.output, std::ios::binary);
  if (!file) {
    std::cerr << "cannot write '" << config.output << "'\n";
    return kExitInputError;
  }
  file << text;
  return r.exit_code;
}

}  // namespace conemeans
