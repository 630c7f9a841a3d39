#include "bmfix/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "bmfix/error.hpp"
#include "json_util.hpp"

namespace bmfix {

namespace {

constexpr std::size_t kMaxRejections = 1000;
constexpr double kGridSlack = 1e-9;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<double> grid_axis(const SampleSpec& g) {
  const auto count = static_cast<std::size_t>(std::floor((g.hi - g.lo) / g.step + kGridSlack));
  std::vector<double> axis;
  axis.reserve(count + 1);
  for (std::size_t i = 0; i <= count; ++i) axis.push_back(g.lo + static_cast<double>(i) * g.step);
  return axis;
}

template <class F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const InvalidInput& e) {
    const std::string what = e.what();
    if (what.rfind("schema error", 0) == 0) throw;
    throw InvalidInput("invalid '" + path + "': " + what);
  }
}

// One generator attempt; returns nullopt when the draw is degenerate.
//
// Point 0 is the root. The rest lie on a few chains z, Sz, S^2 z, ... of the
// planar similarity S(z) = root + rho * R(z - root). A chain point maps to its
// successor (the last one maps to the root), so on a chain the Hausdorff ratio
// is exactly rho^p. Some images also get the root, and with probability 1/2 a
// small twin w joins the root with T(root) = T(w) = {root, w}.
std::optional<Scenario> draw_finite(SplitMix64& rng, std::size_t n, double p) {
  constexpr double kTwoPi = 6.283185307179586;
  const double rho = 0.2 + 0.25 * rng.uniform();
  const double theta = kTwoPi * rng.uniform();
  const double cr = rho * std::cos(theta);
  const double sr = rho * std::sin(theta);
  const double rx = rng.uniform();
  const double ry = rng.uniform();

  // Distances stay well above solver tolerances so that a small residual
  // really means a fixed point; chains restart before shrinking past this.
  constexpr double kMinDist = 1e-6;
  const double floor_radius = 4.0 * std::pow(kMinDist, 1.0 / p);

  const bool twin = rng.uniform() < 0.5 && n >= 4;
  const std::size_t chain_points = n - 1 - (twin ? 1 : 0);

  // Offsets from the root; successor[i] == 0 means "maps to the root".
  std::vector<std::pair<double, double>> off{{0.0, 0.0}};
  std::vector<std::size_t> successor{0};
  double smallest = 1.0;
  while (off.size() <= chain_points) {
    const std::size_t remaining = chain_points + 1 - off.size();
    const std::size_t len = rng.uniform() < 0.5 ? remaining : 1 + rng.below(remaining);
    const double r0 = 0.5 + 0.5 * rng.uniform();
    const double a0 = kTwoPi * rng.uniform();
    double ux = r0 * std::cos(a0);
    double uy = r0 * std::sin(a0);
    for (std::size_t i = 0; i < len; ++i) {
      off.emplace_back(ux, uy);
      smallest = std::min(smallest, std::hypot(ux, uy));
      const double vx = cr * ux - sr * uy;
      uy = sr * ux + cr * uy;
      ux = vx;
      const bool last = i + 1 == len || std::hypot(ux, uy) < floor_radius;
      successor.push_back(last ? 0 : off.size());
      if (last) break;
    }
  }
  std::size_t twin_id = 0;
  if (twin) {
    const double r = smallest * rho * (0.2 + 0.3 * rng.uniform());
    const double a = kTwoPi * rng.uniform();
    off.emplace_back(r * std::cos(a), r * std::sin(a));
    twin_id = off.size() - 1;
    successor.push_back(0);
  }

  std::vector<Point> pts;
  for (const auto& [ox, oy] : off) pts.push_back(Point{rx + ox, ry + oy});
  const BMetricSpace plane = make_power_space(2, p);
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      d[i][j] = d[j][i] = plane.dist(pts[i], pts[j]);
      if (d[i][j] < kMinDist) return std::nullopt;
    }

  Scenario sc;
  sc.space = make_matrix_space(n, d, plane.s());

  std::vector<std::vector<std::size_t>> images(n);
  images[0] = {0};
  if (twin) images[0].push_back(twin_id);
  for (std::size_t i = 1; i < n; ++i) {
    if (twin && i == twin_id) {
      images[i] = images[0];
      continue;
    }
    images[i].push_back(successor[i]);
    if (successor[i] != 0 && rng.uniform() < 0.25) images[i].push_back(0);
  }
  sc.map = SetValuedMap::table(std::move(images));

  static constexpr double kCoeffs[] = {0.5, 0.75, 1.0};
  sc.params.c = kCoeffs[rng.below(3)];
  sc.params.q = kCoeffs[rng.below(3)];
  // Start at the head of the longest chain.
  std::size_t start = 1;
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t depth = 0;
    for (std::size_t j = i; j != 0; j = successor[j]) ++depth;
    if (depth > best) {
      best = depth;
      start = i;
    }
  }
  sc.x0 = Point::at(start);
  sc.tol = 1e-9;
  sc.max_iter = 1000;
  sc.sample.kind = SampleSpec::Kind::Points;
  for (std::size_t i = 0; i < n; ++i) sc.sample.pts.push_back(Point::at(i));
  return sc;
}

}  // namespace

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix(state_);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::size_t SplitMix64::below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

void Scenario::validate() const {
  with_path("params", [&] { params.validate(); });
  with_path("map", [&] { map.validate(space); });
  with_path("x0", [&] { space.check_point(x0); });
  if (x1) with_path("x1", [&] { space.check_point(*x1); });
  if (!(tol > 0.0)) throw InvalidInput("invalid 'tol': must be positive");
  if (max_iter < 1) throw InvalidInput("invalid 'max_iter': must be at least 1");
  if (beta && !(*beta > 0.0 && *beta < 1.0)) throw InvalidInput("invalid 'params.beta': must lie in (0,1)");
  if (sample.kind == SampleSpec::Kind::Grid) {
    if (space.kind() != DomainKind::Vector) throw InvalidInput("invalid 'sample': grids need a vector space");
    if (!(sample.step > 0.0) || !(sample.hi >= sample.lo))
      throw InvalidInput("invalid 'sample': need step > 0 and hi >= lo");
  } else {
    if (sample.pts.empty()) throw InvalidInput("invalid 'sample.pts': empty");
    for (std::size_t i = 0; i < sample.pts.size(); ++i)
      with_path("sample.pts[" + std::to_string(i) + "]", [&] { space.check_point(sample.pts[i]); });
  }
}

std::vector<Point> Scenario::sample_points() const {
  if (sample.kind == SampleSpec::Kind::Points) return sample.pts;
  const auto axis = grid_axis(sample);
  const std::size_t k = space.dimension();
  std::vector<Point> out;
  std::vector<std::size_t> idx(k, 0);
  for (;;) {
    Coords c(k);
    for (std::size_t i = 0; i < k; ++i) c[i] = axis[idx[i]];
    out.emplace_back(std::move(c));
    std::size_t i = 0;
    while (i < k && ++idx[i] == axis.size()) idx[i++] = 0;
    if (i == k) break;
  }
  return out;
}

Scenario paper_example() {
  Scenario sc;
  sc.space = make_power_space(1, 2.0);
  sc.map = SetValuedMap::branches({AffineBranch{{{0.9}}, {0.0}}});
  sc.params = {0.0, 0.0, 0.9};
  sc.x0 = Point::scalar(1.0);
  sc.tol = 1e-9;
  sc.max_iter = 1000;
  sc.sample.kind = SampleSpec::Kind::Grid;
  sc.sample.lo = -1.0;
  sc.sample.hi = 1.0;
  sc.sample.step = 0.1;
  return sc;
}

ContractionCertificate certify_scenario(const Scenario& sc, std::optional<double> gamma) {
  return certify(sc.space, sc.map, distinct_pairs(sc.sample_points()), sc.params.c, sc.params.q, gamma);
}

GeneratedScenario random_finite(std::uint64_t seed, std::size_t n_points, double p, double alpha_cap) {
  if (n_points < 3) throw InvalidInput("random_finite: n_points must be at least 3");
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidInput("random_finite: p must be >= 1");
  if (!(alpha_cap > 0.0 && alpha_cap < 1.0)) throw InvalidInput("random_finite: alpha_cap must lie in (0,1)");

  for (std::size_t attempt = 0; attempt < kMaxRejections; ++attempt) {
    SplitMix64 rng(mix(seed + attempt * 0x9E3779B97F4A7C15ULL));
    auto drawn = draw_finite(rng, n_points, p);
    if (!drawn) continue;
    Scenario& sc = *drawn;

    const auto all = sc.sample_points();
    if (!verify_axioms(sc.space, all, 1e-12 * max_distance(sc.space, all)).passed) continue;

    ContractionCertificate cert = certify_scenario(sc);
    if (!(cert.alpha_min <= alpha_cap) || !cert.verdicts.thm33) continue;

    sc.params.alpha = cert.alpha_min;
    sc.seed = seed;
    return {std::move(sc), std::move(cert), attempt};
  }
  throw Error("random_finite: no admissible instance after " + std::to_string(kMaxRejections) +
              " rejections (seed " + std::to_string(seed) + ")");
}

nlohmann::json scenario_to_json(const Scenario& sc) {
  nlohmann::json params = {{"c", sc.params.c}, {"q", sc.params.q}, {"alpha", sc.params.alpha}};
  if (sc.beta) params["beta"] = *sc.beta;

  nlohmann::json sample;
  if (sc.sample.kind == SampleSpec::Kind::Grid) {
    sample = {{"kind", "grid"}, {"lo", sc.sample.lo}, {"hi", sc.sample.hi}, {"step", sc.sample.step}};
  } else {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : sc.sample.pts) pts.push_back(point_to_json(p));
    sample = {{"kind", "points"}, {"pts", pts}};
  }

  nlohmann::json j = {{"space", space_to_json(sc.space)},
                      {"map", map_to_json(sc.map)},
                      {"params", params},
                      {"x0", point_to_json(sc.x0)},
                      {"tol", sc.tol},
                      {"max_iter", sc.max_iter},
                      {"sample", sample}};
  if (sc.x1) j["x1"] = point_to_json(*sc.x1);
  if (sc.seed) j["seed"] = *sc.seed;
  return j;
}

Scenario scenario_from_json(const nlohmann::json& j) {
  using namespace detail;
  if (!j.is_object()) schema_error("$", "scenario must be a JSON object");

  Scenario sc;
  sc.space = with_path("space", [&] { return space_from_json(require(j, "space", "")); });
  sc.map = map_from_json(require(j, "map", ""));

  const auto& params = require(j, "params", "");
  sc.params.c = get_number(require(params, "c", "params"), "params.c");
  sc.params.q = get_number(require(params, "q", "params"), "params.q");
  sc.params.alpha = get_number(require(params, "alpha", "params"), "params.alpha");
  if (params.contains("beta") && !params["beta"].is_null()) sc.beta = get_number(params["beta"], "params.beta");

  sc.x0 = with_path("x0", [&] { return point_from_json(require(j, "x0", "")); });
  if (j.contains("x1") && !j["x1"].is_null()) sc.x1 = with_path("x1", [&] { return point_from_json(j["x1"]); });
  sc.tol = get_number(require(j, "tol", ""), "tol");
  sc.max_iter = get_count(require(j, "max_iter", ""), "max_iter");
  if (j.contains("seed") && !j["seed"].is_null()) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) schema_error("seed", "expected an integer");
    sc.seed = j["seed"].get<std::uint64_t>();
  }

  const auto& sample = require(j, "sample", "");
  const auto& kind = require(sample, "kind", "sample");
  if (!kind.is_string()) schema_error("sample.kind", "expected a string");
  if (kind == "grid") {
    sc.sample.kind = SampleSpec::Kind::Grid;
    sc.sample.lo = get_number(require(sample, "lo", "sample"), "sample.lo");
    sc.sample.hi = get_number(require(sample, "hi", "sample"), "sample.hi");
    sc.sample.step = get_number(require(sample, "step", "sample"), "sample.step");
  } else if (kind == "points") {
    sc.sample.kind = SampleSpec::Kind::Points;
    const auto& pts = get_array(require(sample, "pts", "sample"), "sample.pts");
    for (std::size_t i = 0; i < pts.size(); ++i)
      sc.sample.pts.push_back(with_path(index_path("sample.pts", i), [&] { return point_from_json(pts[i]); }));
  } else {
    schema_error("sample.kind", "unknown sample kind '" + kind.get<std::string>() + "'");
  }

  sc.validate();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open scenario file '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("malformed JSON in '" + path.string() + "': " + e.what());
  }
  try {
    return scenario_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("schema error in '" + path.string() + "': " + e.what());
  }
}

void save_scenario(const Scenario& sc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write scenario file '" + path.string() + "'");
  out << scenario_to_json(sc).dump(2) << '\n';
}

}  // namespace bmfix
