#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bmfix/bspace.hpp"
#include "bmfix/setops.hpp"

namespace bmfix {

struct AffineBranch {
  std::vector<std::vector<double>> A;  // k x k
  std::vector<double> b;               // k

  friend bool operator==(const AffineBranch&, const AffineBranch&) = default;
};

/// Set-valued map T : X -> B(X). Either an explicit table over the ids of a
/// finite space, or a finite family of affine branches x -> A x + b whose
/// outputs form the image set.
class SetValuedMap {
 public:
  enum class Kind { Table, Branches };

  static SetValuedMap table(std::vector<std::vector<std::size_t>> images);
  static SetValuedMap branches(std::vector<AffineBranch> branches);
  /// T(x) = {p} for every x.
  static SetValuedMap constant(const BMetricSpace& space, const Point& p);

  Kind kind() const noexcept { return kind_; }
  const std::vector<std::vector<std::size_t>>& images() const noexcept { return images_; }
  const std::vector<AffineBranch>& branch_list() const noexcept { return branches_; }

  /// Throws InvalidInput when the map does not fit the space (missing or empty
  /// images, ids out of range, dimension mismatch).
  void validate(const BMetricSpace& space) const;

  PointSet image(const BMetricSpace& space, const Point& x) const;

  friend bool operator==(const SetValuedMap&, const SetValuedMap&) = default;

 private:
  Kind kind_ = Kind::Table;
  std::vector<std::vector<std::size_t>> images_;
  std::vector<AffineBranch> branches_;
};

nlohmann::json map_to_json(const SetValuedMap& map);
SetValuedMap map_from_json(const nlohmann::json& j);

/// Coefficients of the quasi-contraction functional. `q` is the coefficient of
/// the cross term, written d in the classical N_{c,d} notation.
struct QuasiParams {
  double c = 0.0;
  double q = 0.0;
  double alpha = 0.0;

  void validate() const;
  friend bool operator==(const QuasiParams&, const QuasiParams&) = default;
};

/// N_{c,q}(x,y) = max{ d(x,y), c d(x,Tx), c d(y,Ty), q/2 (d(x,Ty) + d(y,Tx)) }.
double n_functional(const BMetricSpace& space, const SetValuedMap& map, double c, double q,
                    const Point& x, const Point& y);

/// max{ d(x,y), d(x,Tx), d(y,Ty), d(x,Ty), d(y,Tx) }, the comparison quantity
/// of the five-term quasi-contraction condition.
double five_term_max(const BMetricSpace& space, const SetValuedMap& map, const Point& x,
                     const Point& y);

using PointPair = std::pair<Point, Point>;

/// All unordered pairs {x_i, x_j}, i < j, of the sample.
std::vector<PointPair> distinct_pairs(const std::vector<Point>& sample);

enum class Coverage { Exhaustive, Empirical };

std::string to_string(Coverage c);

struct CertificateVerdicts {
  bool thm21_feasible = false;       // alpha_min * q * s < 1
  bool thm33 = false;                // max(alpha_min c s, alpha_min q s) < 1
  std::optional<bool> lemma41;       // s * gamma < 1, when a gamma is supplied
  bool thm41 = false;                // alpha41_min <= 1 / (s + s^2)
};

struct ContractionCertificate {
  double s = 1.0;
  double c = 0.0;
  double q = 0.0;
  double alpha_min = 0.0;
  double alpha41_min = 0.0;
  PointPair worst_pair;
  std::size_t worst_index = 0;
  PointPair worst_pair41;
  std::size_t pairs_checked = 0;
  Coverage coverage = Coverage::Empirical;
  bool finite_space = false;
  std::optional<double> gamma;
  CertificateVerdicts verdicts;
  std::vector<std::string> assumptions;
};

/// Smallest alpha with h(Tx,Ty) <= alpha N_{c,q}(x,y) over the supplied pairs,
/// the same for the five-term condition, and the derived verdicts.
/// Throws InvalidInput on an empty pair list or a pair of equal points.
ContractionCertificate certify(const BMetricSpace& space, const SetValuedMap& map,
                               const std::vector<PointPair>& pairs, double c, double q,
                               std::optional<double> gamma = std::nullopt);

double thm41_threshold(double s);

struct TheoremVerdict {
  bool applicable = false;
  std::string condition;  // governing inequality
  double lhs = 0.0;
  double rhs = 0.0;
  std::string note;
};

struct HypothesisVerdicts {
  double alpha = 0.0;
  double s = 1.0;
  double c = 0.0;
  double q = 0.0;
  bool contraction_holds = false;  // alpha >= alpha_min
  TheoremVerdict thm31;
  TheoremVerdict thm32;
  TheoremVerdict thm33;
  TheoremVerdict thm41;
};

HypothesisVerdicts check_hypotheses(const ContractionCertificate& cert, double s, double c,
                                    double q, double alpha);

nlohmann::json certificate_to_json(const ContractionCertificate& cert);
nlohmann::json verdicts_to_json(const HypothesisVerdicts& v);

}  // namespace bmfix
