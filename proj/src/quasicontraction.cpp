#include "bmfix/quasicontraction.hpp"

#include <algorithm>
#include <cmath>

#include "bmfix/error.hpp"
#include "json_util.hpp"

namespace bmfix {

namespace {

constexpr double kAlphaSlack = 1e-12;

Point apply_branch(const AffineBranch& br, const Coords& x) {
  Coords y(br.b);
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += br.A[i][j] * x[j];
  return Point(std::move(y));
}

const char* continuity_note(bool finite) {
  return finite ? "holds (finite space)" : "assumed (caller-asserted)";
}

}  // namespace

SetValuedMap SetValuedMap::table(std::vector<std::vector<std::size_t>> images) {
  SetValuedMap m;
  m.kind_ = Kind::Table;
  m.images_ = std::move(images);
  return m;
}

SetValuedMap SetValuedMap::branches(std::vector<AffineBranch> branches) {
  if (branches.empty()) throw InvalidInput("branch map needs at least one branch");
  SetValuedMap m;
  m.kind_ = Kind::Branches;
  m.branches_ = std::move(branches);
  return m;
}

SetValuedMap SetValuedMap::constant(const BMetricSpace& space, const Point& p) {
  space.check_point(p);
  if (space.kind() == DomainKind::Finite)
    return table(std::vector<std::vector<std::size_t>>(space.size(), {p.id()}));
  const std::size_t k = space.dimension();
  return branches({AffineBranch{std::vector<std::vector<double>>(k, std::vector<double>(k, 0.0)),
                                p.coords()}});
}

void SetValuedMap::validate(const BMetricSpace& space) const {
  if (kind_ == Kind::Table) {
    if (space.kind() != DomainKind::Finite) throw InvalidInput("table maps need a finite space");
    if (images_.size() != space.size())
      throw InvalidInput("table map has " + std::to_string(images_.size()) + " images for " +
                         std::to_string(space.size()) + " points");
    for (std::size_t i = 0; i < images_.size(); ++i) {
      std::vector<Point> pts;
      for (auto id : images_[i]) pts.push_back(Point::at(id));
      try {
        PointSet(space, std::move(pts));
      } catch (const InvalidInput& e) {
        throw InvalidInput("image of point " + std::to_string(i) + ": " + e.what());
      }
    }
    return;
  }
  if (space.kind() != DomainKind::Vector) throw InvalidInput("branch maps need a vector space");
  const std::size_t k = space.dimension();
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    const auto& br = branches_[i];
    bool ok = br.A.size() == k && br.b.size() == k &&
              std::all_of(br.A.begin(), br.A.end(), [k](const auto& row) { return row.size() == k; });
    if (!ok) throw InvalidInput("branch " + std::to_string(i) + " does not match dimension " + std::to_string(k));
  }
}

PointSet SetValuedMap::image(const BMetricSpace& space, const Point& x) const {
  if (kind_ == Kind::Table) {
    std::vector<Point> pts;
    pts.reserve(images_[x.id()].size());
    for (auto id : images_[x.id()]) pts.push_back(Point::at(id));
    return PointSet(space, std::move(pts));
  }
  std::vector<Point> pts;
  pts.reserve(branches_.size());
  for (const auto& br : branches_) pts.push_back(apply_branch(br, x.coords()));
  return PointSet::deduplicated(space, std::move(pts));
}

nlohmann::json map_to_json(const SetValuedMap& map) {
  if (map.kind() == SetValuedMap::Kind::Table) {
    nlohmann::json images = nlohmann::json::object();
    for (std::size_t i = 0; i < map.images().size(); ++i) images[std::to_string(i)] = map.images()[i];
    return {{"kind", "table"}, {"images", images}};
  }
  nlohmann::json brs = nlohmann::json::array();
  for (const auto& br : map.branch_list()) brs.push_back({{"A", br.A}, {"b", br.b}});
  return {{"kind", "branches"}, {"branches", brs}};
}

SetValuedMap map_from_json(const nlohmann::json& j) {
  using namespace detail;
  const std::string path = "map";
  if (!j.is_object()) schema_error(path, "expected an object");
  std::string kind;
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) schema_error(child_path(path, "kind"), "expected a string");
    kind = j["kind"].get<std::string>();
  } else {
    kind = j.contains("branches") ? "branches" : "table";
  }

  if (kind == "table") {
    const auto& images = require(j, "images", path);
    const std::string ipath = child_path(path, "images");
    if (!images.is_object()) schema_error(ipath, "expected an object keyed by point id");
    std::vector<std::vector<std::size_t>> table(images.size());
    for (const auto& [key, val] : images.items()) {
      std::size_t id = 0;
      try {
        std::size_t used = 0;
        id = std::stoul(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        schema_error(child_path(ipath, key), "keys must be point ids");
      }
      if (id >= table.size()) schema_error(child_path(ipath, key), "ids must be 0..n-1 without gaps");
      const auto& arr = get_array(val, child_path(ipath, key));
      for (std::size_t k = 0; k < arr.size(); ++k)
        table[id].push_back(get_count(arr[k], index_path(child_path(ipath, key), k)));
    }
    return SetValuedMap::table(std::move(table));
  }
  if (kind != "branches") schema_error(child_path(path, "kind"), "unknown map kind '" + kind + "'");

  const std::string bpath = child_path(path, "branches");
  const auto& arr = get_array(require(j, "branches", path), bpath);
  std::vector<AffineBranch> brs;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = index_path(bpath, i);
    AffineBranch br;
    const auto& rows = get_array(require(arr[i], "A", p), child_path(p, "A"));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto& row = get_array(rows[r], index_path(child_path(p, "A"), r));
      std::vector<double> v;
      for (std::size_t k = 0; k < row.size(); ++k) v.push_back(get_number(row[k], index_path(child_path(p, "A"), r)));
      br.A.push_back(std::move(v));
    }
    const auto& b = get_array(require(arr[i], "b", p), child_path(p, "b"));
    for (std::size_t k = 0; k < b.size(); ++k) br.b.push_back(get_number(b[k], index_path(child_path(p, "b"), k)));
    brs.push_back(std::move(br));
  }
  if (brs.empty()) schema_error(bpath, "at least one branch required");
  return SetValuedMap::branches(std::move(brs));
}

void QuasiParams::validate() const {
  if (!(c >= 0.0 && c <= 1.0)) throw InvalidInput("c must lie in [0,1]");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidInput("q must lie in [0,1]");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in [0,1)");
}

double n_functional(const BMetricSpace& space, const SetValuedMap& map, double c, double q,
                    const Point& x, const Point& y) {
  const PointSet tx = map.image(space, x);
  const PointSet ty = map.image(space, y);
  const double dxy = space.dist(x, y);
  const double dx_tx = dist_point_set(space, x, tx).distance;
  const double dy_ty = dist_point_set(space, y, ty).distance;
  const double dx_ty = dist_point_set(space, x, ty).distance;
  const double dy_tx = dist_point_set(space, y, tx).distance;
  return std::max({dxy, c * dx_tx, c * dy_ty, 0.5 * q * (dx_ty + dy_tx)});
}

double five_term_max(const BMetricSpace& space, const SetValuedMap& map, const Point& x,
                     const Point& y) {
  const PointSet tx = map.image(space, x);
  const PointSet ty = map.image(space, y);
  return std::max({space.dist(x, y), dist_point_set(space, x, tx).distance,
                   dist_point_set(space, y, ty).distance, dist_point_set(space, x, ty).distance,
                   dist_point_set(space, y, tx).distance});
}

std::vector<PointPair> distinct_pairs(const std::vector<Point>& sample) {
  std::vector<PointPair> out;
  for (std::size_t i = 0; i < sample.size(); ++i)
    for (std::size_t j = i + 1; j < sample.size(); ++j) out.emplace_back(sample[i], sample[j]);
  return out;
}

std::string to_string(Coverage c) { return c == Coverage::Exhaustive ? "exhaustive" : "empirical"; }

double thm41_threshold(double s) { return 1.0 / (s + s * s); }

ContractionCertificate certify(const BMetricSpace& space, const SetValuedMap& map,
                               const std::vector<PointPair>& pairs, double c, double q,
                               std::optional<double> gamma) {
  if (pairs.empty()) throw InvalidInput("certify: no pairs supplied");
  QuasiParams{c, q, 0.0}.validate();
  map.validate(space);

  ContractionCertificate cert;
  cert.s = space.s();
  cert.c = c;
  cert.q = q;
  cert.alpha_min = -1.0;
  cert.alpha41_min = -1.0;
  cert.pairs_checked = pairs.size();
  cert.finite_space = space.kind() == DomainKind::Finite;

  std::vector<char> covered;
  const std::size_t n = space.size();
  if (cert.finite_space) covered.assign(n * n, 0);

  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [x, y] = pairs[i];
    space.check_point(x);
    space.check_point(y);
    if (space.dist(x, y) == 0.0)
      throw InvalidInput("certify: pair " + std::to_string(i) + " has equal points " + to_string(x));

    const PointSet tx = map.image(space, x);
    const PointSet ty = map.image(space, y);
    const double h = hausdorff(space, tx, ty);
    const double dxy = space.dist(x, y);
    const double dx_tx = dist_point_set(space, x, tx).distance;
    const double dy_ty = dist_point_set(space, y, ty).distance;
    const double dx_ty = dist_point_set(space, x, ty).distance;
    const double dy_tx = dist_point_set(space, y, tx).distance;
    const double nval = std::max({dxy, c * dx_tx, c * dy_ty, 0.5 * q * (dx_ty + dy_tx)});
    const double five = std::max({dxy, dx_tx, dy_ty, dx_ty, dy_tx});

    const double ratio = h / nval;
    const double ratio41 = h / five;
    if (ratio > cert.alpha_min) {
      cert.alpha_min = ratio;
      cert.worst_pair = pairs[i];
      cert.worst_index = i;
    }
    if (ratio41 > cert.alpha41_min) {
      cert.alpha41_min = ratio41;
      cert.worst_pair41 = pairs[i];
    }
    if (cert.finite_space) {
      covered[x.id() * n + y.id()] = 1;
      covered[y.id() * n + x.id()] = 1;
    }
  }

  bool all = cert.finite_space;
  for (std::size_t i = 0; all && i < n; ++i)
    for (std::size_t j = i + 1; all && j < n; ++j) all = covered[i * n + j] != 0;
  cert.coverage = all ? Coverage::Exhaustive : Coverage::Empirical;

  const double s = cert.s;
  cert.verdicts.thm21_feasible = cert.alpha_min * q * s < 1.0;
  cert.verdicts.thm33 = cert.alpha_min < 1.0 && std::max(cert.alpha_min * c * s, cert.alpha_min * q * s) < 1.0;
  cert.verdicts.thm41 = cert.alpha41_min < 1.0 && cert.alpha41_min <= thm41_threshold(s);
  if (gamma) {
    cert.gamma = gamma;
    cert.verdicts.lemma41 = s * *gamma < 1.0;
  }

  cert.assumptions.push_back(std::string("continuity of T: ") + continuity_note(cert.finite_space));
  cert.assumptions.push_back(std::string("*-continuity of d: ") + continuity_note(cert.finite_space));
  if (!cert.finite_space)
    cert.assumptions.push_back("alpha_min is a sample statistic over " + std::to_string(pairs.size()) +
                               " pairs");
  return cert;
}

HypothesisVerdicts check_hypotheses(const ContractionCertificate& cert, double s, double c,
                                    double q, double alpha) {
  HypothesisVerdicts v;
  v.alpha = alpha;
  v.s = s;
  v.c = c;
  v.q = q;
  v.contraction_holds = alpha >= 0.0 && alpha < 1.0 && alpha + kAlphaSlack >= cert.alpha_min;

  const std::string cont = continuity_note(cert.finite_space);
  const std::string contraction_note =
      v.contraction_holds ? std::string{} : "contraction condition fails: alpha < alpha_min; ";

  v.thm31.condition = "alpha*q*s < 1";
  v.thm31.lhs = alpha * q * s;
  v.thm31.rhs = 1.0;
  v.thm31.applicable = v.contraction_holds && v.thm31.lhs < 1.0;
  v.thm31.note = contraction_note + "T continuous: " + cont;

  v.thm32 = v.thm31;
  v.thm32.note = contraction_note + "d *-continuous: " + cont;

  v.thm33.condition = "max(alpha*c*s, alpha*q*s) < 1";
  v.thm33.lhs = std::max(alpha * c * s, alpha * q * s);
  v.thm33.rhs = 1.0;
  v.thm33.applicable = v.contraction_holds && v.thm33.lhs < 1.0;
  v.thm33.note = contraction_note;

  v.thm41.condition = "alpha41_min <= 1/(s+s^2)";
  v.thm41.lhs = cert.alpha41_min;
  v.thm41.rhs = thm41_threshold(s);
  v.thm41.applicable = cert.alpha41_min < 1.0 && v.thm41.lhs <= v.thm41.rhs;
  return v;
}

nlohmann::json certificate_to_json(const ContractionCertificate& cert) {
  auto pair_json = [](const PointPair& p) {
    return nlohmann::json::array({point_to_json(p.first), point_to_json(p.second)});
  };
  nlohmann::json verdicts = {{"thm21_feasible", cert.verdicts.thm21_feasible},
                             {"thm33", cert.verdicts.thm33},
                             {"thm41", cert.verdicts.thm41}};
  verdicts["lemma41"] = cert.verdicts.lemma41 ? nlohmann::json(*cert.verdicts.lemma41) : nlohmann::json();
  nlohmann::json j = {{"s", cert.s},
                      {"c", cert.c},
                      {"q", cert.q},
                      {"d_coefficient", cert.q},
                      {"alpha_min", cert.alpha_min},
                      {"alpha41_min", cert.alpha41_min},
                      {"thm41_threshold", thm41_threshold(cert.s)},
                      {"worst_pair", pair_json(cert.worst_pair)},
                      {"worst_pair41", pair_json(cert.worst_pair41)},
                      {"pairs_checked", cert.pairs_checked},
                      {"coverage", to_string(cert.coverage)},
                      {"verdicts", verdicts},
                      {"assumptions", cert.assumptions}};
  j["gamma"] = cert.gamma ? nlohmann::json(*cert.gamma) : nlohmann::json();
  return j;
}

nlohmann::json verdicts_to_json(const HypothesisVerdicts& v) {
  auto one = [](const TheoremVerdict& t) {
    return nlohmann::json{{"applicable", t.applicable}, {"condition", t.condition},
                          {"lhs", t.lhs},               {"rhs", t.rhs},
                          {"note", t.note}};
  };
  return {{"alpha", v.alpha},
          {"s", v.s},
          {"c", v.c},
          {"q", v.q},
          {"contraction_holds", v.contraction_holds},
          {"thm31", one(v.thm31)},
          {"thm32", one(v.thm32)},
          {"thm33", one(v.thm33)},
          {"thm41", one(v.thm41)}};
}

}  // namespace bmfix
