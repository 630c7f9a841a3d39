#include "bmfix/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "bmfix/error.hpp"

namespace bmfix::cli {

namespace {

constexpr double kAuditSlack = 1e-9;
constexpr std::size_t kDefaultRandomPoints = 5;
constexpr double kDefaultRandomP = 2.0;
constexpr double kDefaultRandomCap = 0.5;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

Scenario with_overrides(Scenario sc, const Overrides& ov) {
  if (ov.tol) sc.tol = *ov.tol;
  if (ov.beta) sc.beta = *ov.beta;
  if (ov.max_iter) sc.max_iter = *ov.max_iter;
  sc.validate();
  return sc;
}

// Runs `body`, mapping errors to exit codes with a diagnostic on err.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const HypothesisViolation& e) {
    err << "hypothesis violation: " << e.what() << '\n';
    return kViolation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
}

}  // namespace

Scenario resolve_scenario(const std::string& name_or_path, std::optional<std::uint64_t> seed) {
  if (name_or_path == "paper-example") return paper_example();
  if (name_or_path == "random-finite")
    return random_finite(seed.value_or(0), kDefaultRandomPoints, kDefaultRandomP, kDefaultRandomCap).scenario;
  return load_scenario(name_or_path);
}

std::string scenario_digest(const Scenario& sc) {
  const std::string text = scenario_to_json(sc).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

RunResult execute(const Scenario& sc) {
  sc.validate();
  RunResult r;
  r.scenario = sc;

  const auto t0 = std::chrono::steady_clock::now();
  r.certificate = certify_scenario(sc);
  r.certify_ms = ms_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  OrbitOptions opts;
  opts.x1 = sc.x1;
  opts.beta = sc.beta;
  opts.tol = sc.tol;
  opts.max_iter = sc.max_iter;
  r.trace = run_orbit(sc.space, sc.map, sc.params, sc.x0, opts);
  r.orbit_ms = ms_since(t1);

  const double s = sc.space.s();
  r.certificate.gamma = r.trace.gamma;
  r.certificate.verdicts.lemma41 = s * r.trace.gamma < 1.0;
  r.hypotheses = check_hypotheses(r.certificate, s, sc.params.c, sc.params.q, sc.params.alpha);
  r.audit = audit_trace(sc.space, r.trace);
  return r;
}

nlohmann::json make_report(const RunResult& r) {
  const auto& sc = r.scenario;
  nlohmann::json cert = certificate_to_json(r.certificate);
  cert["hypotheses"] = verdicts_to_json(r.hypotheses);
  const bool valid = r.hypotheses.contraction_holds;
  const bool minimal = sc.params.alpha <= r.certificate.alpha_min;
  cert["supplied_alpha"] = {
      {"alpha", sc.params.alpha},
      {"valid", valid},
      {"minimal", minimal},
      {"note", "supplied alpha = " + fmt17(sc.params.alpha) +
                   (valid ? " is a valid" : " is NOT a valid") + (valid && !minimal ? " (non-minimal)" : "") +
                   " certificate; minimal feasible alpha = " + fmt17(r.certificate.alpha_min)}};

  nlohmann::json orbit = {{"scenario_digest", scenario_digest(sc)},
                          {"status", to_string(r.trace.status)},
                          {"iterations", r.trace.iterations()},
                          {"residual", r.trace.residual},
                          {"tol", r.trace.tol},
                          {"beta", r.trace.beta},
                          {"gamma", r.trace.gamma}};
  orbit["fixed_point"] = r.trace.fixed_point ? point_to_json(*r.trace.fixed_point) : nlohmann::json();
  if (r.trace.fixed_point) {
    const auto check = verify_fixed_point(sc.space, sc.map, *r.trace.fixed_point, sc.tol);
    orbit["fixed_point_check"] = {{"residual", check.residual}, {"pass", check.pass}};
  }
  if (r.trace.violation_step) orbit["violation_step"] = *r.trace.violation_step;
  if (!r.trace.message.empty()) orbit["message"] = r.trace.message;

  const bool within = r.audit.cauchy_ratio <= 1.0 + kAuditSlack && r.audit.chaining_ratio <= 1.0 + kAuditSlack;
  nlohmann::json audit = {{"cauchy_ratio", r.audit.cauchy_ratio},
                          {"chaining_ratio", r.audit.chaining_ratio},
                          {"decay_ratio", r.audit.decay_ratio},
                          {"within_bounds", within}};
  if (!r.trace.steps.empty()) {
    const auto series = cauchy_series(r.trace.gamma, sc.space.s(), r.trace.steps[0]);
    audit["series_S"] = series.S;
    audit["series_terms"] = series.terms_used;
  }

  nlohmann::json timing = {{"certify", r.certify_ms}, {"orbit", r.orbit_ms}, {"total", r.certify_ms + r.orbit_ms}};
  return {{"certificate", cert}, {"orbit", orbit}, {"audit", audit}, {"timing_ms", timing}};
}

int exit_code_for(const RunResult& r) {
  if (!r.hypotheses.contraction_holds || !r.certificate.verdicts.thm21_feasible) return kViolation;
  switch (r.trace.status) {
    case OrbitStatus::Converged:
      return kConverged;
    case OrbitStatus::MaxIter:
      return kMaxIter;
    case OrbitStatus::RatioViolation:
      return kViolation;
  }
  return kViolation;
}

int cmd_run(const std::string& scenario, const std::filesystem::path& out_dir, const Overrides& ov,
            std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (ov.format != "csv" && ov.format != "json") throw InvalidInput("--format must be csv or json");
    const Scenario sc = with_overrides(resolve_scenario(scenario, ov.seed), ov);
    const RunResult r = execute(sc);

    std::filesystem::create_directories(out_dir);
    {
      const auto trace_path = out_dir / (ov.format == "json" ? "trace.json" : "trace.csv");
      std::ofstream f(trace_path);
      if (!f) throw Error("cannot write " + trace_path.string());
      if (ov.format == "json")
        f << trace_to_json(r.trace).dump(2) << '\n';
      else
        f << trace_to_csv(sc.space, r.trace);
    }
    {
      std::ofstream f(out_dir / "report.json");
      if (!f) throw Error("cannot write report.json");
      f << make_report(r).dump(2) << '\n';
    }

    const int code = exit_code_for(r);
    out << "status: " << to_string(r.trace.status) << ", iterations: " << r.trace.iterations()
        << ", residual: " << fmt17(r.trace.residual) << '\n';
    if (code == kViolation) {
      if (!r.hypotheses.contraction_holds)
        err << "hypothesis violation: alpha = " << fmt17(sc.params.alpha) << " is below alpha_min = "
            << fmt17(r.certificate.alpha_min) << '\n';
      if (r.trace.status == OrbitStatus::RatioViolation) err << "ratio violation: " << r.trace.message << '\n';
    }
    return code;
  });
}

int cmd_verify(const std::string& scenario, const Overrides& ov, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario sc = with_overrides(resolve_scenario(scenario, ov.seed), ov);
    const auto pts = sc.sample_points();
    const AxiomReport axioms = verify_axioms(sc.space, pts, 1e-12 * max_distance(sc.space, pts));
    const ContractionCertificate cert = certify_scenario(sc);
    const HypothesisVerdicts hyp = check_hypotheses(cert, sc.space.s(), sc.params.c, sc.params.q, sc.params.alpha);

    nlohmann::json j = {{"axioms", axiom_report_to_json(axioms)},
                        {"estimated_min_s", pts.size() >= 2 ? nlohmann::json(estimate_min_s(sc.space, pts)) : nlohmann::json()},
                        {"certificate", certificate_to_json(cert)},
                        {"hypotheses", verdicts_to_json(hyp)}};
    out << j.dump(2) << '\n';
    const bool ok = axioms.passed && hyp.thm33.applicable;
    if (!axioms.passed) err << "axiom check failed with " << axioms.violations.size() << " violation(s)\n";
    if (!hyp.thm33.applicable) err << "max(alpha*c*s, alpha*q*s) < 1 test does not hold\n";
    return ok ? kConverged : kViolation;
  });
}

int cmd_compare(const std::string& scenario, const Overrides& ov, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario sc = with_overrides(resolve_scenario(scenario, ov.seed), ov);
    const ContractionCertificate cert = certify_scenario(sc);
    const HypothesisVerdicts hyp = check_hypotheses(cert, sc.space.s(), sc.params.c, sc.params.q, sc.params.alpha);

    if (ov.format == "json") {
      out << nlohmann::json{{"thm33", verdicts_to_json(hyp)["thm33"]}, {"thm41", verdicts_to_json(hyp)["thm41"]},
                            {"alpha_min", cert.alpha_min}, {"alpha41_min", cert.alpha41_min}}
                 .dump(2)
          << '\n';
      return kConverged;
    }

    out << "s = " << fmt17(sc.space.s()) << ", c = " << fmt17(sc.params.c) << ", q (d) = " << fmt17(sc.params.q)
        << ", alpha = " << fmt17(sc.params.alpha) << ", alpha_min = " << fmt17(cert.alpha_min)
        << ", alpha41_min = " << fmt17(cert.alpha41_min) << " (" << to_string(cert.coverage) << ")\n";
    out << std::left << std::setw(8) << "theorem" << std::setw(10) << "verdict" << std::setw(34) << "condition"
        << "values\n";
    const auto& t33 = hyp.thm33;
    out << std::setw(8) << "thm33" << std::setw(10) << (t33.applicable ? "YES" : "NO") << std::setw(34)
        << "max{alpha*c*s, alpha*q*s} < 1" << fmt17(t33.lhs) << (t33.lhs < t33.rhs ? " < " : " >= ")
        << fmt17(t33.rhs) << (hyp.contraction_holds ? "" : " (alpha < alpha_min)") << '\n';
    const auto& t41 = hyp.thm41;
    out << std::setw(8) << "thm41" << std::setw(10) << (t41.applicable ? "YES" : "NO") << std::setw(34)
        << "alpha <= 1/(s+s^2)" << fmt17(t41.lhs) << (t41.lhs <= t41.rhs ? " <= " : " > ") << fmt17(t41.rhs)
        << '\n';
    return kConverged;
  });
}

}  // namespace bmfix::cli
