#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "bmfix/orbit.hpp"
#include "bmfix/quasicontraction.hpp"
#include "bmfix/scenarios.hpp"

namespace bmfix::cli {

enum ExitCode : int {
  kConverged = 0,
  kViolation = 1,
  kMaxIter = 2,
  kInvalidInput = 3,
};

struct Overrides {
  std::optional<double> tol;
  std::optional<double> beta;
  std::optional<std::size_t> max_iter;
  std::optional<std::uint64_t> seed;
  std::string format = "csv";  // trace format for run; csv|json output for compare
};

/// Built-in names ("paper-example", "random-finite") win over file paths.
Scenario resolve_scenario(const std::string& name_or_path, std::optional<std::uint64_t> seed = std::nullopt);

/// Hex FNV-1a of the scenario's canonical JSON.
std::string scenario_digest(const Scenario& sc);

struct RunResult {
  Scenario scenario;
  ContractionCertificate certificate;
  HypothesisVerdicts hypotheses;
  OrbitTrace trace;
  BoundAudit audit;
  double certify_ms = 0.0;
  double orbit_ms = 0.0;
};

/// Certification, orbit and audit for one scenario. Propagates InvalidInput
/// and HypothesisViolation.
RunResult execute(const Scenario& sc);

/// report.json content. Keys: certificate, orbit, audit, timing_ms.
nlohmann::json make_report(const RunResult& r);

int exit_code_for(const RunResult& r);

int cmd_run(const std::string& scenario, const std::filesystem::path& out_dir, const Overrides& ov,
            std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& scenario, const Overrides& ov, std::ostream& out, std::ostream& err);
int cmd_compare(const std::string& scenario, const Overrides& ov, std::ostream& out, std::ostream& err);

}  // namespace bmfix::cli
