#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "bmfix/error.hpp"
#include "bmfix/orbit.hpp"
#include "bmfix/scenarios.hpp"
#include "oracles.hpp"

using namespace bmfix;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  auto dir = fs::temp_directory_path() / "bmfix_unit";
  fs::create_directories(dir);
  return dir / name;
}

std::string load_error(const std::string& text) {
  auto path = temp_file("bad.json");
  std::ofstream(path) << text;
  try {
    load_scenario(path);
  } catch (const InvalidInput& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("splitmix64 reference outputs") {
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next() == 0x06C45D188009454FULL);
  SplitMix64 u(1);
  for (int i = 0; i < 1000; ++i) {
    double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("paper_example contents and verdicts") {
  auto sc = paper_example();
  CHECK(sc.space.s() == 2.0);
  CHECK(sc.params == QuasiParams{0.0, 0.0, 0.9});
  CHECK(sc.x0 == Point::scalar(1.0));
  CHECK(sc.tol == 1e-9);
  CHECK(sc.max_iter == 1000);
  const auto grid = sc.sample_points();
  REQUIRE(grid.size() == 21);
  CHECK(grid.front() == Point::scalar(-1.0));
  CHECK(grid.back().coords()[0] == doctest::Approx(1.0).epsilon(1e-15));

  auto cert = certify_scenario(sc);
  CHECK(cert.alpha_min == doctest::Approx(0.81).epsilon(1e-9));
  CHECK(cert.verdicts.thm33);
  CHECK_FALSE(cert.verdicts.thm41);

  auto trace = run_orbit(sc.space, sc.map, sc.params, sc.x0, {.tol = sc.tol, .max_iter = sc.max_iter});
  CHECK(trace.status == OrbitStatus::Converged);
}

TEST_CASE("scenario save/load round trip") {
  auto path = temp_file("paper.json");
  auto sc = paper_example();
  save_scenario(sc, path);
  CHECK(load_scenario(path) == sc);

  auto gen = random_finite(3, 6, 1.5, 0.6).scenario;
  gen.x1 = Point::at(0);
  gen.beta = 0.97;
  save_scenario(gen, path);
  auto back = load_scenario(path);
  CHECK(back == gen);
  CHECK(back.space.matrix() == gen.space.matrix());  // bit-exact doubles
}

TEST_CASE("scenario load errors name the field") {
  auto base = scenario_to_json(paper_example());

  auto no_space = base;
  no_space.erase("space");
  CHECK(load_error(no_space.dump()).find("space") != std::string::npos);

  auto no_tol = base;
  no_tol.erase("tol");
  CHECK(load_error(no_tol.dump()).find("'tol'") != std::string::npos);

  auto bad_c = base;
  bad_c["params"]["c"] = 1.5;
  CHECK(load_error(bad_c.dump()).find("params") != std::string::npos);

  auto bad_x0 = base;
  bad_x0["x0"] = 3;
  CHECK(load_error(bad_x0.dump()).find("x0") != std::string::npos);

  auto asym = base;
  asym["space"] = {{"kind", "matrix"}, {"n", 2}, {"s", 1.0}, {"d", {{0, 1}, {2, 0}}}};
  CHECK(load_error(asym.dump()).find("asymmetry at (0,1)") != std::string::npos);

  CHECK(load_error("{ not json").find("malformed JSON") != std::string::npos);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), InvalidInput);

  auto bad_grid = base;
  bad_grid["sample"]["step"] = -0.1;
  CHECK(load_error(bad_grid.dump()).find("sample") != std::string::npos);
}

TEST_CASE("random_finite is deterministic and certified") {
  auto a = random_finite(42, 5, 2.0, 0.5);
  auto b = random_finite(42, 5, 2.0, 0.5);
  CHECK(a.scenario == b.scenario);
  CHECK(scenario_to_json(a.scenario).dump() == scenario_to_json(b.scenario).dump());
  CHECK(a.certificate.alpha_min == b.certificate.alpha_min);
  CHECK(a.rejections == b.rejections);
  CHECK(a.scenario.seed == std::optional<std::uint64_t>{42});

  CHECK(a.certificate.alpha_min <= 0.5);
  CHECK(a.certificate.verdicts.thm33);
  CHECK(a.certificate.coverage == Coverage::Exhaustive);
  CHECK(certify_scenario(a.scenario).alpha_min == a.certificate.alpha_min);

  // Brute-force fixed points of the table.
  CHECK_FALSE(oracle::table_fixed_points(a.scenario.map.images()).empty());

  CHECK_FALSE(random_finite(43, 5, 2.0, 0.5).scenario == a.scenario);
  CHECK_THROWS_AS(random_finite(1, 2, 2.0, 0.5), InvalidInput);
  CHECK_THROWS_AS(random_finite(1, 5, 0.5, 0.5), InvalidInput);
  CHECK_THROWS_AS(random_finite(1, 5, 2.0, 1.0), InvalidInput);
}

TEST_CASE("property: generated scenarios satisfy axioms and admit fixed points") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 3 + seed % 10;
    const double p = 1.0 + static_cast<double>(seed % 3) * 0.5;
    auto gen = random_finite(seed, n, p, 0.6);
    const auto& sc = gen.scenario;
    const auto pts = sc.sample_points();
    CHECK(pts.size() == n);
    CHECK(verify_axioms(sc.space, pts, 1e-12 * max_distance(sc.space, pts)).passed);
    CHECK(std::max(gen.certificate.alpha_min * sc.params.c * sc.space.s(),
                   gen.certificate.alpha_min * sc.params.q * sc.space.s()) < 1.0);
    CHECK_FALSE(oracle::table_fixed_points(sc.map.images()).empty());
  }
}
