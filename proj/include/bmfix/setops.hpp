#pragma once

#include <cstddef>
#include <vector>

#include "bmfix/bspace.hpp"

namespace bmfix {

/// Finite nonempty set of points of a host space, with no two elements at
/// distance zero. Stands in for the bounded closed sets: on a finite set every
/// inf and sup is attained.
class PointSet {
 public:
  /// Throws InvalidInput on an empty list, a foreign point, or a duplicate.
  PointSet(const BMetricSpace& space, std::vector<Point> elements);

  /// Like the constructor, but drops later elements at distance zero from an
  /// earlier one instead of rejecting them.
  static PointSet deduplicated(const BMetricSpace& space, std::vector<Point> elements);

  std::size_t size() const noexcept { return elements_.size(); }
  const Point& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<Point>& elements() const noexcept { return elements_; }
  auto begin() const noexcept { return elements_.begin(); }
  auto end() const noexcept { return elements_.end(); }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  PointSet() = default;
  std::vector<Point> elements_;
};

struct Nearest {
  double distance;
  std::size_t index;  // smallest index among ties
};

/// d(x, C) = min over c in C of d(x, c), with the attaining element.
Nearest dist_point_set(const BMetricSpace& space, const Point& x, const PointSet& set);

/// sup over a in A of d(a, B).
double directed_hausdorff(const BMetricSpace& space, const PointSet& a, const PointSet& b);

/// Hausdorff-Pompeiu distance max{sup_a d(a,B), sup_b d(b,A)}.
double hausdorff(const BMetricSpace& space, const PointSet& a, const PointSet& b);

}  // namespace bmfix
