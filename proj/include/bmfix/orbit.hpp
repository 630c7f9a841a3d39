#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "bmfix/bspace.hpp"
#include "bmfix/quasicontraction.hpp"

namespace bmfix {

/// Step-ratio bound of the Picard orbit built with selection parameter beta:
///   gamma = max{beta, q s beta / (2 - q s beta)}.
/// beta must lie in (0, min(1, 1/(q s))); throws InvalidInput otherwise.
double gamma_of(double beta, double q, double s);

/// Upper end of the admissible beta interval, min(1, 1/(q s)).
double beta_upper(double q, double s);

/// Midpoint of (alpha, beta_upper(q, s)).
double default_beta(double alpha, double q, double s);

/// Picks the element of T(x_cur) nearest to x_cur (smallest index on ties) and
/// checks d(x_cur, next) < beta N_{c,q}(x_prev, x_cur) unless the step is zero.
/// Throws RatioViolation (step 0) when the check fails.
Point select_next(const BMetricSpace& space, const SetValuedMap& map, const Point& x_prev,
                  const Point& x_cur, double beta, double c, double q);

enum class OrbitStatus { Converged, MaxIter, RatioViolation };

std::string to_string(OrbitStatus s);

struct OrbitTrace {
  std::vector<Point> points;
  std::vector<double> steps;  // steps[n] = d(x_n, x_{n+1})
  double beta = 0.0;
  double gamma = 0.0;
  double tol = 0.0;
  OrbitStatus status = OrbitStatus::MaxIter;
  std::optional<Point> fixed_point;
  double residual = 0.0;  // d(x_N, T(x_N)) at the final point
  std::optional<std::size_t> violation_step;
  std::string message;

  std::size_t iterations() const noexcept { return steps.size(); }
};

struct OrbitOptions {
  std::optional<Point> x1;
  std::optional<double> beta;
  double tol = 1e-9;
  std::size_t max_iter = 1000;
};

/// Builds x_0, x_1, ... with x_{n+1} in T(x_n) and stops once the residual
/// d(x_n, T(x_n)) is within tol. Parameter errors throw (InvalidInput for
/// malformed values, HypothesisViolation when alpha q s >= 1); ratio failures
/// during the run are recorded in the trace status instead.
OrbitTrace run_orbit(const BMetricSpace& space, const SetValuedMap& map, const QuasiParams& params,
                     const Point& x0, const OrbitOptions& opts = {});

/// s^ceil(log2 k) * sum of the k steps: bounds d(x_0, x_k).
double chaining_bound(std::span<const double> steps, double s);

struct CauchyCertificate {
  double gamma = 0.0;
  double s = 1.0;
  double S = 0.0;  // sum over n >= 1 of s^(2n) gamma^(2^(n-1))
  double d01 = 0.0;
  int terms_used = 0;
};

/// Sums s^(2n) gamma^(2^(n-1)) until a term drops below 1e-16 of the partial
/// sum or underflows, at most 64 terms.
CauchyCertificate cauchy_series(double gamma, double s, double d01 = 0.0);

/// gamma^m d01 S / (1 - gamma): bounds d(x_{m+1}, x_{m+k}) for every k.
double cauchy_bound(std::size_t m, const CauchyCertificate& cert);

struct FixedPointCheck {
  double residual;
  bool pass;
};

FixedPointCheck verify_fixed_point(const BMetricSpace& space, const SetValuedMap& map,
                                   const Point& u, double tol);

struct BoundAudit {
  double cauchy_ratio = 0.0;    // max over (m,k) of d(x_{m+1}, x_{m+k}) / cauchy_bound(m)
  double chaining_ratio = 0.0;  // max over k of d(x_0, x_k) / chaining_bound(steps[0..k))
  double decay_ratio = 0.0;     // max over n of d_n / (gamma d_{n-1})
};

/// Replays a trace against its own bounds.
BoundAudit audit_trace(const BMetricSpace& space, const OrbitTrace& trace);

/// CSV with header n,point,d_n,ratio,gamma,cauchy_bound_at_n; 17 significant
/// digits; empty cells where a column is undefined.
std::string trace_to_csv(const BMetricSpace& space, const OrbitTrace& trace);
nlohmann::json trace_to_json(const OrbitTrace& trace);

}  // namespace bmfix
