#include "bmfix/bspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bmfix/error.hpp"
#include "json_util.hpp"

namespace bmfix {

namespace {

constexpr double kCoordTol = 1e-12;

std::string pair_str(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

double max_coord_diff(const Coords& a, const Coords& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

std::string to_string(const Point& p) {
  if (p.is_id()) return std::to_string(p.id());
  std::ostringstream os;
  os.precision(17);
  const auto& c = p.coords();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) os << ';';
    os << c[i];
  }
  return os.str();
}

std::string to_string(Axiom a) {
  switch (a) {
    case Axiom::Identity:
      return "identity";
    case Axiom::Symmetry:
      return "symmetry";
    case Axiom::RelaxedTriangle:
      return "relaxed-triangle";
  }
  return "unknown";
}

BMetricSpace make_power_space(std::size_t dimension, double p) {
  if (dimension == 0) throw InvalidInput("power space: dimension must be positive");
  if (!(p > 0.0) || !std::isfinite(p))
    throw InvalidInput("power space: exponent p must be positive, got " + std::to_string(p));
  BMetricSpace sp;
  sp.kind_ = DomainKind::Vector;
  sp.dim_ = dimension;
  sp.p_ = p;
  sp.s_ = std::max(1.0, std::exp2(p - 1.0));
  return sp;
}

BMetricSpace make_matrix_space(std::size_t n, const std::vector<std::vector<double>>& matrix,
                               double s) {
  if (n == 0) throw InvalidInput("matrix space: n must be positive");
  if (!(s >= 1.0) || !std::isfinite(s))
    throw InvalidInput("matrix space: s must be >= 1, got " + std::to_string(s));
  if (matrix.size() != n) throw InvalidInput("matrix space: expected " + std::to_string(n) + " rows");
  for (std::size_t i = 0; i < n; ++i)
    if (matrix[i].size() != n)
      throw InvalidInput("matrix space: row " + std::to_string(i) + " has wrong length");

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double v = matrix[i][j];
      if (!std::isfinite(v)) throw InvalidInput("matrix space: non-finite entry at " + pair_str(i, j));
      if (v < 0.0) throw InvalidInput("matrix space: negative entry at " + pair_str(i, j));
      if (i == j && v != 0.0) throw InvalidInput("matrix space: nonzero diagonal at " + pair_str(i, j));
      if (i < j) {
        if (matrix[j][i] != v) throw InvalidInput("matrix space: asymmetry at " + pair_str(i, j));
        if (v == 0.0) throw InvalidInput("matrix space: zero off-diagonal entry at " + pair_str(i, j));
      }
    }
  }

  BMetricSpace sp;
  sp.kind_ = DomainKind::Finite;
  sp.n_ = n;
  sp.s_ = s;
  sp.d_.reserve(n * n);
  for (const auto& row : matrix) sp.d_.insert(sp.d_.end(), row.begin(), row.end());
  return sp;
}

bool BMetricSpace::contains(const Point& p) const noexcept {
  if (kind_ == DomainKind::Finite) return p.is_id() && p.id() < n_;
  if (p.is_id()) return false;
  const auto& c = p.coords();
  return c.size() == dim_ && std::all_of(c.begin(), c.end(), [](double v) { return std::isfinite(v); });
}

void BMetricSpace::check_point(const Point& p) const {
  if (contains(p)) return;
  if (kind_ == DomainKind::Finite)
    throw InvalidInput("point " + to_string(p) + " is not an id below " + std::to_string(n_));
  throw InvalidInput("point " + to_string(p) + " is not a finite " + std::to_string(dim_) + "-vector");
}

double BMetricSpace::dist(const Point& x, const Point& y) const {
  if (kind_ == DomainKind::Finite) return d_[x.id() * n_ + y.id()];
  const auto& a = x.coords();
  const auto& b = y.coords();
  // (a-b)^2 == (b-a)^2 in IEEE arithmetic, so the result is exactly symmetric.
  double ss = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    double t = a[i] - b[i];
    ss += t * t;
  }
  if (p_ == 2.0) return ss;
  if (p_ == 1.0) return std::sqrt(ss);
  return std::pow(ss, 0.5 * p_);
}

double max_distance(const BMetricSpace& space, const std::vector<Point>& sample) {
  double m = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i)
    for (std::size_t j = i + 1; j < sample.size(); ++j) m = std::max(m, space.dist(sample[i], sample[j]));
  return m;
}

AxiomReport verify_axioms(const BMetricSpace& space, const std::vector<Point>& sample, double tol) {
  if (sample.empty()) throw InvalidInput("verify_axioms: empty sample");
  for (const auto& p : sample) space.check_point(p);

  const std::size_t n = sample.size();
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = space.dist(sample[i], sample[j]);

  AxiomReport report;
  auto add = [&](Axiom a, std::vector<Point> w, double lhs, double rhs) {
    report.violations.push_back({a, std::move(w), lhs, rhs});
  };

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Point& x = sample[i];
      const Point& y = sample[j];
      double dxy = d[i * n + j];
      bool same = space.kind() == DomainKind::Finite ? x.id() == y.id() : x.coords() == y.coords();
      if (same) {
        if (dxy != 0.0) add(Axiom::Identity, {x, y}, dxy, 0.0);
      } else if (dxy == 0.0) {
        // Distinct ids at distance zero, or coordinates that differ by more
        // than rounding noise.
        if (space.kind() == DomainKind::Finite || max_coord_diff(x.coords(), y.coords()) > kCoordTol)
          add(Axiom::Identity, {x, y}, dxy, 0.0);
      }
      if (i < j && dxy != d[j * n + i]) add(Axiom::Symmetry, {x, y}, dxy, d[j * n + i]);
    }
  }

  const double s = space.s();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double lhs = d[i * n + j];
      for (std::size_t k = 0; k < n; ++k) {
        double rhs = s * (d[i * n + k] + d[k * n + j]);
        if (lhs > rhs + tol) add(Axiom::RelaxedTriangle, {sample[i], sample[j], sample[k]}, lhs, rhs);
      }
    }
  }

  report.passed = report.violations.empty();
  return report;
}

double estimate_min_s(const BMetricSpace& space, const std::vector<Point>& sample) {
  for (const auto& p : sample) space.check_point(p);
  const std::size_t n = sample.size();
  bool distinct = false;
  for (std::size_t i = 1; i < n && !distinct; ++i) distinct = !(sample[i] == sample[0]);
  if (!distinct) throw InvalidInput("estimate_min_s: sample needs at least 2 distinct points");

  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = space.dist(sample[i], sample[j]);

  double best = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (sample[i] == sample[j]) continue;
      for (std::size_t k = 0; k < n; ++k) {
        double den = d[i * n + k] + d[k * n + j];
        if (den == 0.0) continue;
        best = std::max(best, d[i * n + j] / den);
      }
    }
  }
  return best;
}

nlohmann::json point_to_json(const Point& p) {
  if (p.is_id()) return p.id();
  return p.coords();
}

Point point_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) {
    if (j.get<long long>() < 0) throw InvalidInput("point id must be non-negative");
    return Point::at(j.get<std::size_t>());
  }
  if (j.is_array()) {
    Coords c;
    for (const auto& v : j) {
      if (!v.is_number()) throw InvalidInput("point coordinates must be numbers");
      c.push_back(v.get<double>());
    }
    return Point(std::move(c));
  }
  throw InvalidInput("a point is an array of floats or an integer id");
}

nlohmann::json space_to_json(const BMetricSpace& space) {
  if (space.kind() == DomainKind::Vector)
    return {{"kind", "power"}, {"dim", space.dimension()}, {"p", space.exponent()}};
  const std::size_t n = space.size();
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(space.matrix().begin() + i * n, space.matrix().begin() + (i + 1) * n);
    rows.push_back(row);
  }
  return {{"kind", "matrix"}, {"n", n}, {"s", space.s()}, {"d", rows}};
}

BMetricSpace space_from_json(const nlohmann::json& j) {
  using namespace detail;
  const std::string path = "space";
  if (!j.is_object()) schema_error(path, "expected an object");
  std::string kind = j.contains("kind") ? j["kind"].get<std::string>() : "matrix";
  if (kind == "power") {
    auto dim = get_count(require(j, "dim", path), child_path(path, "dim"));
    double p = get_number(require(j, "p", path), child_path(path, "p"));
    return make_power_space(dim, p);
  }
  if (kind != "matrix") schema_error(child_path(path, "kind"), "unknown space kind '" + kind + "'");
  auto n = get_count(require(j, "n", path), child_path(path, "n"));
  double s = get_number(require(j, "s", path), child_path(path, "s"));
  const auto& rows = get_array(require(j, "d", path), child_path(path, "d"));
  std::vector<std::vector<double>> m;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = get_array(rows[i], index_path(child_path(path, "d"), i));
    std::vector<double> r;
    for (std::size_t k = 0; k < row.size(); ++k)
      r.push_back(get_number(row[k], index_path(index_path(child_path(path, "d"), i), k)));
    m.push_back(std::move(r));
  }
  return make_matrix_space(n, m, s);
}

nlohmann::json axiom_report_to_json(const AxiomReport& report) {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& viol : report.violations) {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& p : viol.witnesses) w.push_back(point_to_json(p));
    v.push_back({{"axiom", to_string(viol.axiom)}, {"witnesses", w}, {"lhs", viol.lhs}, {"rhs", viol.rhs}});
  }
  return {{"passed", report.passed}, {"violations", v}};
}

}  // namespace bmfix
