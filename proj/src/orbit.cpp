#include "bmfix/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "bmfix/error.hpp"
#include "bmfix/setops.hpp"

namespace bmfix {

namespace {

constexpr double kDecaySlack = 1e-12;
constexpr double kSeriesRelStop = 1e-16;
constexpr int kSeriesMaxTerms = 64;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double residual_at(const BMetricSpace& space, const SetValuedMap& map, const Point& x) {
  return dist_point_set(space, x, map.image(space, x)).distance;
}

}  // namespace

double beta_upper(double q, double s) {
  const double qs = q * s;
  return qs > 0.0 ? std::min(1.0, 1.0 / qs) : 1.0;
}

double default_beta(double alpha, double q, double s) { return 0.5 * (alpha + beta_upper(q, s)); }

double gamma_of(double beta, double q, double s) {
  const double upper = beta_upper(q, s);
  if (!(beta > 0.0 && beta < upper))
    throw InvalidInput("beta = " + fmt17(beta) + " outside (0, " + fmt17(upper) + ")");
  const double t = q * s * beta;
  return std::max(beta, t / (2.0 - t));
}

Point select_next(const BMetricSpace& space, const SetValuedMap& map, const Point& x_prev,
                  const Point& x_cur, double beta, double c, double q) {
  const PointSet image = map.image(space, x_cur);
  const Nearest nearest = dist_point_set(space, x_cur, image);
  if (nearest.distance == 0.0) return image[nearest.index];
  const double n = n_functional(space, map, c, q, x_prev, x_cur);
  if (!(nearest.distance < beta * n))
    throw RatioViolation("step from " + to_string(x_cur) + ": d = " + fmt17(nearest.distance) +
                             " is not below beta*N = " + fmt17(beta * n),
                         0);
  return image[nearest.index];
}

std::string to_string(OrbitStatus s) {
  switch (s) {
    case OrbitStatus::Converged:
      return "converged";
    case OrbitStatus::MaxIter:
      return "max_iter";
    case OrbitStatus::RatioViolation:
      return "ratio_violation";
  }
  return "unknown";
}

OrbitTrace run_orbit(const BMetricSpace& space, const SetValuedMap& map, const QuasiParams& params,
                     const Point& x0, const OrbitOptions& opts) {
  params.validate();
  map.validate(space);
  space.check_point(x0);
  if (!(opts.tol > 0.0)) throw InvalidInput("tol must be positive");
  if (opts.max_iter < 1) throw InvalidInput("max_iter must be at least 1");

  const double s = space.s();
  if (!(params.alpha * params.q * s < 1.0))
    throw HypothesisViolation("alpha*q*s = " + fmt17(params.alpha * params.q * s) + " is not below 1");

  OrbitTrace trace;
  trace.tol = opts.tol;
  trace.beta = opts.beta.value_or(default_beta(params.alpha, params.q, s));
  if (!(trace.beta > params.alpha))
    throw InvalidInput("beta = " + fmt17(trace.beta) + " must exceed alpha = " + fmt17(params.alpha));
  trace.gamma = gamma_of(trace.beta, params.q, s);
  trace.points.push_back(x0);

  auto finish = [&](OrbitStatus status, double residual) {
    trace.status = status;
    trace.residual = residual;
    if (status == OrbitStatus::Converged) trace.fixed_point = trace.points.back();
    return trace;
  };

  if (opts.x1) {
    space.check_point(*opts.x1);
    const PointSet tx0 = map.image(space, x0);
    if (dist_point_set(space, *opts.x1, tx0).distance != 0.0)
      throw InvalidInput("x1 = " + to_string(*opts.x1) + " is not an element of T(x0)");
    trace.points.push_back(*opts.x1);
  } else {
    const PointSet tx0 = map.image(space, x0);
    const Nearest nearest = dist_point_set(space, x0, tx0);
    if (nearest.distance <= opts.tol) return finish(OrbitStatus::Converged, nearest.distance);
    trace.points.push_back(tx0[nearest.index]);
  }
  trace.steps.push_back(space.dist(trace.points[0], trace.points[1]));

  for (;;) {
    const Point& cur = trace.points.back();
    const double r = residual_at(space, map, cur);
    if (r <= opts.tol) return finish(OrbitStatus::Converged, r);
    if (trace.steps.size() >= opts.max_iter) return finish(OrbitStatus::MaxIter, r);

    const Point& prev = trace.points[trace.points.size() - 2];
    const std::size_t step = trace.steps.size();
    Point next;
    try {
      next = select_next(space, map, prev, cur, trace.beta, params.c, params.q);
    } catch (const RatioViolation& e) {
      trace.violation_step = step;
      trace.message = e.what();
      return finish(OrbitStatus::RatioViolation, r);
    }
    const double dn = space.dist(cur, next);
    const double dprev = trace.steps.back();
    if (dn > trace.gamma * dprev + kDecaySlack * dprev) {
      trace.violation_step = step;
      trace.message = "step " + std::to_string(step) + ": d_n = " + fmt17(dn) + " exceeds gamma*d_{n-1} = " +
                      fmt17(trace.gamma * dprev);
      return finish(OrbitStatus::RatioViolation, r);
    }
    trace.points.push_back(std::move(next));
    trace.steps.push_back(dn);
  }
}

double chaining_bound(std::span<const double> steps, double s) {
  if (steps.empty()) throw InvalidInput("chaining_bound: no steps");
  if (!(s >= 1.0)) throw InvalidInput("chaining_bound: s must be >= 1");
  int n = 0;
  while ((std::size_t{1} << n) < steps.size()) ++n;
  double sum = 0.0;
  for (double d : steps) sum += d;
  return std::pow(s, n) * sum;
}

CauchyCertificate cauchy_series(double gamma, double s, double d01) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidInput("cauchy_series: gamma must lie in [0,1)");
  if (!(s >= 1.0) || !std::isfinite(s)) throw InvalidInput("cauchy_series: s must be >= 1");

  CauchyCertificate cert{gamma, s, 0.0, d01, 0};
  // Neumaier-compensated sum; terms first grow with s^(2n), then collapse.
  double sum = 0.0;
  double comp = 0.0;
  const double log_s = std::log(s);
  const double log_g = gamma > 0.0 ? std::log(gamma) : -std::numeric_limits<double>::infinity();
  for (int n = 1; n <= kSeriesMaxTerms; ++n) {
    const double e = std::ldexp(1.0, n - 1);
    double term = 0.0;
    if (gamma > 0.0) {
      const double lg = 2.0 * n * log_s + e * log_g;
      if (lg > -746.0) {
        term = std::pow(s, 2.0 * n) * std::pow(gamma, e);
        if (!std::isfinite(term) || term == 0.0) term = std::exp(lg);
      }
    }
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
    cert.terms_used = n;
    if (term == 0.0 || term < kSeriesRelStop * (sum + comp)) break;
  }
  cert.S = sum + comp;
  return cert;
}

double cauchy_bound(std::size_t m, const CauchyCertificate& cert) {
  // Repeated multiplication keeps bound(m+1) == gamma * bound(m) bit for bit.
  double b = cert.d01 * cert.S / (1.0 - cert.gamma);
  for (std::size_t i = 0; i < m && b != 0.0; ++i) b *= cert.gamma;
  return b;
}

FixedPointCheck verify_fixed_point(const BMetricSpace& space, const SetValuedMap& map, const Point& u,
                                   double tol) {
  space.check_point(u);
  const double r = residual_at(space, map, u);
  return {r, r <= tol};
}

BoundAudit audit_trace(const BMetricSpace& space, const OrbitTrace& trace) {
  BoundAudit audit;
  const auto& x = trace.points;
  const auto& d = trace.steps;
  const std::size_t N = d.size();
  if (N == 0) return audit;

  auto ratio = [](double actual, double bound) {
    if (actual == 0.0) return 0.0;
    return bound > 0.0 ? actual / bound : std::numeric_limits<double>::infinity();
  };

  const CauchyCertificate cert = cauchy_series(trace.gamma, space.s(), d[0]);
  double bound = cauchy_bound(0, cert);
  for (std::size_t m = 0; m + 1 <= N; ++m) {
    for (std::size_t k = 2; m + k <= N; ++k)
      audit.cauchy_ratio = std::max(audit.cauchy_ratio, ratio(space.dist(x[m + 1], x[m + k]), bound));
    bound *= cert.gamma;
  }

  for (std::size_t k = 1; k <= N; ++k)
    audit.chaining_ratio =
        std::max(audit.chaining_ratio, ratio(space.dist(x[0], x[k]), chaining_bound(std::span(d).first(k), space.s())));

  for (std::size_t n = 1; n < N; ++n)
    audit.decay_ratio = std::max(audit.decay_ratio, ratio(d[n], trace.gamma * d[n - 1]));
  return audit;
}

std::string trace_to_csv(const BMetricSpace& space, const OrbitTrace& trace) {
  std::string out = "n,point,d_n,ratio,gamma,cauchy_bound_at_n\n";
  const std::size_t N = trace.steps.size();
  std::optional<CauchyCertificate> cert;
  if (N > 0) cert = cauchy_series(trace.gamma, space.s(), trace.steps[0]);
  double bound = cert ? cauchy_bound(0, *cert) : 0.0;
  for (std::size_t n = 0; n < trace.points.size(); ++n) {
    out += std::to_string(n);
    out += ',';
    out += to_string(trace.points[n]);
    out += ',';
    if (n < N) out += fmt17(trace.steps[n]);
    out += ',';
    if (n >= 1 && n < N && trace.steps[n - 1] > 0.0) out += fmt17(trace.steps[n] / trace.steps[n - 1]);
    out += ',';
    out += fmt17(trace.gamma);
    out += ',';
    if (cert) {
      out += fmt17(bound);
      bound *= cert->gamma;
    }
    out += '\n';
  }
  return out;
}

nlohmann::json trace_to_json(const OrbitTrace& trace) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : trace.points) pts.push_back(point_to_json(p));
  nlohmann::json j = {{"points", pts},
                      {"steps", trace.steps},
                      {"beta", trace.beta},
                      {"gamma", trace.gamma},
                      {"tol", trace.tol},
                      {"status", to_string(trace.status)},
                      {"iterations", trace.iterations()},
                      {"residual", trace.residual}};
  j["fixed_point"] = trace.fixed_point ? point_to_json(*trace.fixed_point) : nlohmann::json();
  if (trace.violation_step) j["violation_step"] = *trace.violation_step;
  if (!trace.message.empty()) j["message"] = trace.message;
  return j;
}

}  // namespace bmfix
