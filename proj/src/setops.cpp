#include "bmfix/setops.hpp"

#include <algorithm>

#include "bmfix/error.hpp"

namespace bmfix {

PointSet::PointSet(const BMetricSpace& space, std::vector<Point> elements) {
  if (elements.empty()) throw InvalidInput("point set must be nonempty");
  for (const auto& p : elements) space.check_point(p);
  for (std::size_t i = 0; i < elements.size(); ++i)
    for (std::size_t j = i + 1; j < elements.size(); ++j)
      if (space.dist(elements[i], elements[j]) == 0.0)
        throw InvalidInput("point set has duplicate elements " + to_string(elements[i]) + " and " +
                           to_string(elements[j]));
  elements_ = std::move(elements);
}

PointSet PointSet::deduplicated(const BMetricSpace& space, std::vector<Point> elements) {
  if (elements.empty()) throw InvalidInput("point set must be nonempty");
  PointSet out;
  for (auto& p : elements) {
    space.check_point(p);
    bool dup = std::any_of(out.elements_.begin(), out.elements_.end(),
                           [&](const Point& q) { return space.dist(p, q) == 0.0; });
    if (!dup) out.elements_.push_back(std::move(p));
  }
  return out;
}

Nearest dist_point_set(const BMetricSpace& space, const Point& x, const PointSet& set) {
  Nearest best{space.dist(x, set[0]), 0};
  for (std::size_t i = 1; i < set.size(); ++i) {
    double v = space.dist(x, set[i]);
    if (v < best.distance) best = {v, i};
  }
  return best;
}

double directed_hausdorff(const BMetricSpace& space, const PointSet& a, const PointSet& b) {
  double sup = 0.0;
  for (const auto& p : a) sup = std::max(sup, dist_point_set(space, p, b).distance);
  return sup;
}

double hausdorff(const BMetricSpace& space, const PointSet& a, const PointSet& b) {
  return std::max(directed_hausdorff(space, a, b), directed_hausdorff(space, b, a));
}

}  // namespace bmfix
