#include <algorithm>
#include <string>

#include <doctest.h>

#include "bmfix/bspace.hpp"
#include "bmfix/error.hpp"
#include "oracles.hpp"

using namespace bmfix;

namespace {

std::vector<Point> scalars(std::initializer_list<double> xs) {
  std::vector<Point> out;
  for (double x : xs) out.push_back(Point::scalar(x));
  return out;
}

std::string error_of(auto&& f) {
  try {
    f();
  } catch (const InvalidInput& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("power space declares s = max(1, 2^(p-1))") {
  auto sq = make_power_space(1, 2.0);
  CHECK(sq.s() == 2.0);
  CHECK(sq.dist(Point::scalar(1.0), Point::scalar(3.0)) == 4.0);

  auto metric = make_power_space(1, 1.0);
  CHECK(metric.s() == 1.0);
  CHECK(metric.dist(Point::scalar(-1.0), Point::scalar(2.5)) == 3.5);

  CHECK(make_power_space(2, 3.0).s() == 4.0);
  CHECK(make_power_space(3, 0.5).s() == 1.0);

  CHECK_THROWS_AS(make_power_space(1, 0.0), InvalidInput);
  CHECK_THROWS_AS(make_power_space(1, -1.0), InvalidInput);
}

TEST_CASE("power space p=3 in the plane passes the axiom check on 200 random points") {
  auto sp = make_power_space(2, 3.0);
  oracle::Rng rng{7};
  std::vector<Point> pts;
  for (int i = 0; i < 200; ++i) pts.push_back(Point{rng.uniform(-5, 5), rng.uniform(-5, 5)});
  auto report = verify_axioms(sp, pts, 1e-12 * max_distance(sp, pts));
  CHECK(report.passed);
  CHECK(report.violations.empty());
}

TEST_CASE("matrix space validation") {
  CHECK_NOTHROW(make_matrix_space(2, {{0, 1}, {1, 0}}, 1.0));
  auto sq = make_matrix_space(3, {{0, 1, 4}, {1, 0, 1}, {4, 1, 0}}, 2.0);
  CHECK(verify_axioms(sq, {Point::at(0), Point::at(1), Point::at(2)}, 0.0).passed);

  CHECK(error_of([] { make_matrix_space(2, {{0, 1}, {2, 0}}, 1.0); }).find("asymmetry at (0,1)") != std::string::npos);
  CHECK(error_of([] { make_matrix_space(2, {{0, -1}, {-1, 0}}, 1.0); }).find("negative entry at (0,1)") !=
        std::string::npos);
  CHECK(error_of([] { make_matrix_space(2, {{1, 1}, {1, 0}}, 1.0); }).find("nonzero diagonal at (0,0)") !=
        std::string::npos);
  CHECK(error_of([] { make_matrix_space(2, {{0, 0}, {0, 0}}, 1.0); }).find("zero off-diagonal entry at (0,1)") !=
        std::string::npos);
  CHECK_THROWS_AS(make_matrix_space(2, {{0, 1}, {1, 0}}, 0.5), InvalidInput);
}

TEST_CASE("verify_axioms on the squared line") {
  auto sp = make_power_space(1, 2.0);
  auto sample = scalars({0, 1, 2});
  CHECK(verify_axioms(sp, sample, 0.0).passed);

  // Same distances with s = 1.9: d(0,2) = 4 > 1.9 * (1 + 1) = 3.8.
  auto tight = make_matrix_space(3, {{0, 1, 4}, {1, 0, 1}, {4, 1, 0}}, 1.9);
  auto report = verify_axioms(tight, {Point::at(0), Point::at(1), Point::at(2)}, 0.0);
  REQUIRE_FALSE(report.passed);
  bool found = false;
  for (const auto& v : report.violations) {
    CHECK(v.axiom == Axiom::RelaxedTriangle);
    if (v.witnesses[0] == Point::at(0) && v.witnesses[1] == Point::at(2) && v.witnesses[2] == Point::at(1)) {
      found = true;
      CHECK(v.lhs == 4.0);
      CHECK(v.rhs == doctest::Approx(3.8).epsilon(1e-15));
    }
  }
  CHECK(found);
  CHECK(report.violations.size() == 2);  // (0,2) and (2,0) through 1

  CHECK(verify_axioms(sp, scalars({3.5}), 0.0).passed);
  CHECK_THROWS_AS(verify_axioms(sp, {}, 0.0), InvalidInput);
}

TEST_CASE("verify_axioms identity axiom") {
  // Repeated ids are the same point.
  auto sp = make_matrix_space(2, {{0, 1}, {1, 0}}, 1.0);
  CHECK(verify_axioms(sp, {Point::at(0), Point::at(0), Point::at(1)}, 0.0).passed);

  // (1e-5)^100 underflows to 0 although the points are far apart.
  auto steep = make_power_space(1, 100.0);
  auto report = verify_axioms(steep, scalars({0.0, 1e-5}), 0.0);
  REQUIRE_FALSE(report.passed);
  CHECK(report.violations[0].axiom == Axiom::Identity);

  // Below the coordinate tolerance the zero distance is accepted.
  CHECK(verify_axioms(make_power_space(1, 2.0), scalars({0.0, 1e-200}), 0.0).passed);
}

TEST_CASE("estimate_min_s brute force") {
  CHECK(estimate_min_s(make_power_space(1, 1.0), scalars({0, 1, 2})) == 1.0);
  CHECK(estimate_min_s(make_power_space(1, 2.0), scalars({0, 1, 2})) == 2.0);
  // max over triples: 100 / (1 + 81) for (0,10) via 1.
  CHECK(estimate_min_s(make_power_space(1, 2.0), scalars({0, 1, 10})) == doctest::Approx(100.0 / 82.0).epsilon(1e-15));
  CHECK_THROWS_AS(estimate_min_s(make_power_space(1, 2.0), scalars({1, 1})), InvalidInput);
}

TEST_CASE("property: power spaces honour their declared s on random samples") {
  oracle::Rng rng{2024};
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t dim = 1 + rng.below(3);
    const double p = rng.uniform(0.3, 4.0);
    auto sp = make_power_space(dim, p);
    std::vector<Point> pts;
    for (int i = 0; i < 25; ++i) {
      Coords c(dim);
      for (auto& v : c) v = rng.uniform(-3, 3);
      pts.emplace_back(std::move(c));
    }
    const double tol = 1e-12 * max_distance(sp, pts);
    const auto report = verify_axioms(sp, pts, tol);
    CHECK_MESSAGE(report.passed, "dim=" << dim << " p=" << p);
    CHECK(estimate_min_s(sp, pts) <= sp.s() + 1e-12);

    // Order-insensitive verdict.
    auto shuffled = pts;
    std::reverse(shuffled.begin(), shuffled.end());
    std::rotate(shuffled.begin(), shuffled.begin() + 7, shuffled.end());
    CHECK(verify_axioms(sp, shuffled, tol).passed == report.passed);

    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < pts.size(); ++j) CHECK(sp.dist(pts[i], pts[j]) == sp.dist(pts[j], pts[i]));
  }
}

TEST_CASE("property: understated s is caught regardless of sample order") {
  oracle::Rng rng{99};
  auto sq = make_power_space(1, 2.0);
  std::vector<Point> pts;
  for (int i = 0; i < 30; ++i) pts.push_back(Point::scalar(rng.uniform(-1, 1)));
  const double s_hat = estimate_min_s(sq, pts);
  REQUIRE(s_hat > 1.5);

  const std::size_t n = pts.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = sq.dist(pts[i], pts[j]);
  std::vector<Point> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(Point::at(i));

  auto under = make_matrix_space(n, m, 0.99 * s_hat > 1.0 ? 0.99 * s_hat : 1.0);
  CHECK_FALSE(verify_axioms(under, ids, 0.0).passed);
  std::reverse(ids.begin(), ids.end());
  CHECK_FALSE(verify_axioms(under, ids, 0.0).passed);

  auto exact = make_matrix_space(n, m, s_hat);
  CHECK(verify_axioms(exact, ids, 1e-12 * max_distance(exact, ids)).passed);
}

TEST_CASE("space JSON round trip and errors") {
  auto sq = make_matrix_space(3, {{0, 1, 4}, {1, 0, 1}, {4, 1, 0}}, 2.0);
  CHECK(space_from_json(space_to_json(sq)) == sq);
  auto pw = make_power_space(2, 1.5);
  CHECK(space_from_json(space_to_json(pw)) == pw);

  // Standalone matrix files carry no "kind".
  auto j = nlohmann::json::parse(R"({"n": 2, "s": 1.0, "d": [[0, 1], [1, 0]]})");
  CHECK(space_from_json(j).size() == 2);
  auto bad = nlohmann::json::parse(R"({"n": 2, "s": 1.0, "d": [[0, 1], [2, 0]]})");
  CHECK(error_of([&] { space_from_json(bad); }).find("asymmetry") != std::string::npos);
  auto missing = nlohmann::json::parse(R"({"n": 2, "d": [[0, 1], [1, 0]]})");
  CHECK(error_of([&] { space_from_json(missing); }).find("space.s") != std::string::npos);
}
