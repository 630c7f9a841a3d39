#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace bmfix {

struct PointId {
  std::size_t value = 0;
  friend bool operator==(PointId, PointId) = default;
};

using Coords = std::vector<double>;

/// A point is either a coordinate vector (continuous domains) or an index
/// into the point list of a finite space.
class Point {
 public:
  Point() = default;
  Point(Coords coords) : rep_(std::move(coords)) {}
  Point(std::initializer_list<double> coords) : rep_(Coords(coords)) {}
  explicit Point(PointId id) : rep_(id) {}

  static Point at(std::size_t id) { return Point(PointId{id}); }
  static Point scalar(double x) { return Point(Coords{x}); }

  bool is_id() const noexcept { return std::holds_alternative<PointId>(rep_); }
  std::size_t id() const { return std::get<PointId>(rep_).value; }
  const Coords& coords() const { return std::get<Coords>(rep_); }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::variant<Coords, PointId> rep_;
};

std::string to_string(const Point& p);

enum class DomainKind { Vector, Finite };

/// Distance structure with relaxed triangle inequality
///   d(x,y) <= s * (d(x,z) + d(z,y)).
/// Two carriers are supported: R^k with d = |x - y|^p, and a finite point set
/// whose distances are read from a matrix.
class BMetricSpace {
 public:
  DomainKind kind() const noexcept { return kind_; }
  double s() const noexcept { return s_; }

  // Vector domains.
  std::size_t dimension() const noexcept { return dim_; }
  double exponent() const noexcept { return p_; }

  // Finite domains.
  std::size_t size() const noexcept { return n_; }
  const std::vector<double>& matrix() const noexcept { return d_; }

  double dist(const Point& x, const Point& y) const;

  // Throws InvalidInput if p does not belong to the domain.
  void check_point(const Point& p) const;
  bool contains(const Point& p) const noexcept;

  friend bool operator==(const BMetricSpace&, const BMetricSpace&) = default;

  friend BMetricSpace make_power_space(std::size_t dimension, double p);
  friend BMetricSpace make_matrix_space(std::size_t n,
                                        const std::vector<std::vector<double>>& matrix,
                                        double s);

 private:
  DomainKind kind_ = DomainKind::Vector;
  double s_ = 1.0;
  std::size_t dim_ = 0;
  double p_ = 1.0;
  std::size_t n_ = 0;
  std::vector<double> d_;  // row-major n x n
};

/// R^dimension with d(x,y) = ||x - y||_2^p and s = max(1, 2^(p-1)).
BMetricSpace make_power_space(std::size_t dimension, double p);

/// Finite space over ids 0..n-1. The matrix must be symmetric with a zero
/// diagonal and strictly positive off-diagonal entries; the b-metric axioms
/// themselves are not checked here (see verify_axioms).
BMetricSpace make_matrix_space(std::size_t n,
                               const std::vector<std::vector<double>>& matrix,
                               double s);

enum class Axiom { Identity, Symmetry, RelaxedTriangle };

std::string to_string(Axiom a);

struct AxiomViolation {
  Axiom axiom;
  std::vector<Point> witnesses;  // (x, y) or (x, y, z) with z the pivot
  double lhs;
  double rhs;
};

struct AxiomReport {
  bool passed = true;
  std::vector<AxiomViolation> violations;
};

/// Checks identity, symmetry and the relaxed triangle over every ordered
/// triple of the sample. Violations are reported, never thrown.
AxiomReport verify_axioms(const BMetricSpace& space, const std::vector<Point>& sample,
                          double tol);

/// Tightest s satisfying the relaxed triangle on the sample (at least 1).
double estimate_min_s(const BMetricSpace& space, const std::vector<Point>& sample);

/// Largest pairwise distance in the sample; used to scale tolerances.
double max_distance(const BMetricSpace& space, const std::vector<Point>& sample);

// JSON carriers. Points are arrays of floats or integer ids; matrix spaces are
// {"n":..,"s":..,"d":[[..]]}, power spaces {"kind":"power","dim":..,"p":..}.
nlohmann::json point_to_json(const Point& p);
Point point_from_json(const nlohmann::json& j);
nlohmann::json space_to_json(const BMetricSpace& space);
BMetricSpace space_from_json(const nlohmann::json& j);
nlohmann::json axiom_report_to_json(const AxiomReport& report);

}  // namespace bmfix
