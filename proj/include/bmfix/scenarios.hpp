#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bmfix/bspace.hpp"
#include "bmfix/quasicontraction.hpp"

namespace bmfix {

/// splitmix64: the state advances by the golden-ratio increment and each
/// output is a mixed copy of the state. Platform independent.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n);

 private:
  std::uint64_t state_;
};

struct SampleSpec {
  enum class Kind { Grid, Points };
  Kind kind = Kind::Points;
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;
  std::vector<Point> pts;

  friend bool operator==(const SampleSpec&, const SampleSpec&) = default;
};

struct Scenario {
  BMetricSpace space;
  SetValuedMap map;
  QuasiParams params;
  std::optional<double> beta;
  Point x0;
  std::optional<Point> x1;
  double tol = 1e-9;
  std::size_t max_iter = 1000;
  std::optional<std::uint64_t> seed;
  SampleSpec sample;

  /// Throws InvalidInput naming the offending field.
  void validate() const;

  /// Points the certificate and axiom checks run over. Grids expand to the
  /// Cartesian product lo, lo+step, ..., hi in every coordinate.
  std::vector<Point> sample_points() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// d(x,y) = (x-y)^2 on the real line (s = 2), T(x) = {9x/10}, c = q = 0,
/// alpha = 0.9, started from x0 = 1 and certified on the grid -1.0:0.1:1.0.
Scenario paper_example();

struct GeneratedScenario {
  Scenario scenario;
  ContractionCertificate certificate;
  std::size_t rejections = 0;
};

/// Seeded random finite instance: n_points in the plane under the p-power
/// distance, stored as a distance matrix. The points form chains of a planar
/// similarity that shrinks toward point 0; the table map follows the chains,
/// so every orbit reaches a fixed point. Pairwise distances are at least 1e-6.
/// Certified exhaustively. Attempts are resampled until alpha_min <= alpha_cap
/// and the max(alpha c s, alpha q s) < 1 test passes; throws Error after 1000
/// rejections.
GeneratedScenario random_finite(std::uint64_t seed, std::size_t n_points, double p, double alpha_cap);

nlohmann::json scenario_to_json(const Scenario& sc);
Scenario scenario_from_json(const nlohmann::json& j);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& sc, const std::filesystem::path& path);

/// Certificate over every distinct pair of the scenario's sample.
ContractionCertificate certify_scenario(const Scenario& sc, std::optional<double> gamma = std::nullopt);

}  // namespace bmfix
