#include "minimax/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace minimax {

namespace {

// shared bisection settings for the KKT multiplier searches
constexpr int kMaxBisect = 200;
constexpr double kBisectTol = 1e-12;

}  // namespace

ConstraintSet ConstraintSet::unconstrained(std::size_t d) {
  MM_CHECK(d > 0, "set: dimension must be positive");
  ConstraintSet s;
  s.kind = SetKind::Unconstrained;
  s.dim = d;
  return s;
}

ConstraintSet ConstraintSet::box(Vector lo, Vector hi) {
  MM_CHECK(!lo.empty() && lo.size() == hi.size(), "box: bound dimensions differ");
  check_finite(lo, "box lower");
  check_finite(hi, "box upper");
  for (std::size_t i = 0; i < lo.size(); ++i)
    MM_CHECK(lo[i] <= hi[i], "box: lower exceeds upper");
  ConstraintSet s;
  s.kind = SetKind::Box;
  s.dim = lo.size();
  s.lower = std::move(lo);
  s.upper = std::move(hi);
  return s;
}

ConstraintSet ConstraintSet::ball(Vector c, double r) {
  MM_CHECK(!c.empty(), "ball: empty center");
  MM_CHECK(std::isfinite(r) && r > 0, "ball: radius must be positive");
  check_finite(c, "ball center");
  ConstraintSet s;
  s.kind = SetKind::Ball;
  s.dim = c.size();
  s.center = std::move(c);
  s.radius = r;
  return s;
}

ConstraintSet ConstraintSet::simplex(std::size_t d) {
  MM_CHECK(d > 0, "simplex: dimension must be positive");
  ConstraintSet s;
  s.kind = SetKind::Simplex;
  s.dim = d;
  return s;
}

bool ConstraintSet::contains(const Vector& x, double tol) const {
  if (x.size() != dim) return false;
  switch (kind) {
    case SetKind::Unconstrained:
      return true;
    case SetKind::Box:
      for (std::size_t i = 0; i < dim; ++i)
        if (x[i] < lower[i] - tol || x[i] > upper[i] + tol) return false;
      return true;
    case SetKind::Ball:
      return norm2(vsub(x, center)) <= radius + tol;
    case SetKind::Simplex: {
      double s = 0.0;
      for (double xi : x) {
        if (xi < -tol) return false;
        s += xi;
      }
      return std::fabs(s - 1.0) <= tol;
    }
  }
  return false;
}

Metric Metric::identity(double rho) {
  MM_CHECK(rho > 0 && rho <= 1.0, "identity metric: need 0 < rho_floor <= 1");
  Metric m;
  m.kind = MetricKind::Identity;
  m.rho_floor = rho;
  return m;
}

Metric Metric::scalar_metric(double b, double rho) {
  MM_CHECK(std::isfinite(b) && b > 0, "scalar metric: b must be positive");
  MM_CHECK(rho > 0 && rho <= b, "scalar metric: need 0 < rho_floor <= b");
  Metric m;
  m.kind = MetricKind::Scalar;
  m.scalar = b;
  m.rho_floor = rho;
  return m;
}

Metric Metric::diagonal(Vector d, double rho) {
  MM_CHECK(!d.empty(), "diagonal metric: empty diagonal");
  check_finite(d, "diagonal metric");
  MM_CHECK(rho > 0, "diagonal metric: rho_floor must be positive");
  for (double di : d)
    MM_CHECK(di >= rho, "diagonal metric: entry below rho_floor");
  Metric m;
  m.kind = MetricKind::Diagonal;
  m.diag = std::move(d);
  m.rho_floor = rho;
  return m;
}

double Metric::lambda_min(std::size_t d) const {
  if (kind != MetricKind::Diagonal) return entry(0);
  double m = diag[0];
  for (std::size_t i = 1; i < d; ++i) m = std::min(m, diag[i]);
  return m;
}

double Metric::lambda_max(std::size_t d) const {
  if (kind != MetricKind::Diagonal) return entry(0);
  double m = diag[0];
  for (std::size_t i = 1; i < d; ++i) m = std::max(m, diag[i]);
  return m;
}

namespace {

// sort-based exact Euclidean projection onto the probability simplex
Vector project_simplex(const Vector& v) {
  const std::size_t n = v.size();
  Vector u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0;
  double tau = 0.0;
  std::size_t k = 0;
  for (std::size_t j = 0; j < n; ++j) {
    css += u[j];
    const double t = (css - 1.0) / double(j + 1);
    if (u[j] - t > 0) {
      tau = t;
      k = j + 1;
    }
  }
  MM_CHECK(k > 0, "simplex projection: no active index");
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::max(0.0, v[i] - tau);
  return x;
}

// weighted simplex projection: x_i = max(0, u_i - s/a_i) with s chosen so the
// coordinates sum to one. The sum is continuous and nonincreasing in s, so a
// bracketing bisection on s is robust for any positive weights.
Vector project_simplex_weighted(const Vector& u, const Metric& metric) {
  const std::size_t n = u.size();
  // feasible inputs pass through untouched (also serves the v = 0 case)
  {
    double s = 0.0;
    bool nonneg = true;
    for (double ui : u) {
      s += ui;
      nonneg = nonneg && ui >= 0.0;
    }
    if (nonneg && s == 1.0) return u;
  }
  double lo = metric.entry(0) * (u[0] - 1.0);
  double hi = metric.entry(0) * u[0];
  for (std::size_t i = 1; i < n; ++i) {
    lo = std::min(lo, metric.entry(i) * (u[i] - 1.0));  // sum(lo) >= 1
    hi = std::max(hi, metric.entry(i) * u[i]);          // sum(hi) == 0
  }
  const auto sum_at = [&](double s) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      total += std::max(0.0, u[i] - s / metric.entry(i));
    return total;
  };
  for (int it = 0; it < kMaxBisect && hi - lo > kBisectTol * std::max(1.0, std::fabs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sum_at(mid) >= 1.0)
      lo = mid;
    else
      hi = mid;
  }
  const double s = 0.5 * (lo + hi);
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::max(0.0, u[i] - s / metric.entry(i));
  return x;
}

// weighted projection onto a ball: x_i(nu) = (a_i u_i + nu c_i)/(a_i + nu)
// walks from u (nu = 0) toward the center as nu grows, so bisect on nu
Vector project_ball_weighted(const Vector& u, const ConstraintSet& set,
                             const Metric& metric) {
  const std::size_t n = u.size();
  // feasible inputs pass through untouched (also serves the v = 0 case)
  if (norm2(vsub(u, set.center)) <= set.radius) return u;
  const auto dist_at = [&](double nu, Vector* out) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = metric.entry(i);
      const double xi = (a * u[i] + nu * set.center[i]) / (a + nu);
      if (out) (*out)[i] = xi;
      const double di = xi - set.center[i];
      d2 += di * di;
    }
    return std::sqrt(d2);
  };
  double lo = 0.0;
  double hi = 1.0;
  while (dist_at(hi, nullptr) > set.radius && hi < 1e100) hi *= 2.0;
  MM_CHECK(hi < 1e100, "ball projection: multiplier bracket failed");
  for (int it = 0; it < kMaxBisect && hi - lo > kBisectTol * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (dist_at(mid, nullptr) > set.radius)
      lo = mid;
    else
      hi = mid;
  }
  Vector x(n);
  dist_at(0.5 * (lo + hi), &x);
  return x;
}

}  // namespace

Vector project(const ConstraintSet& set, const Vector& v) {
  check_dim(v, set.dim, "project");
  check_finite(v, "project");
  switch (set.kind) {
    case SetKind::Unconstrained:
      return v;
    case SetKind::Box: {
      Vector x(set.dim);
      for (std::size_t i = 0; i < set.dim; ++i)
        x[i] = std::min(set.upper[i], std::max(set.lower[i], v[i]));
      return x;
    }
    case SetKind::Ball: {
      const Vector d = vsub(v, set.center);
      const double n = norm2(d);
      if (n <= set.radius) return v;
      Vector x(set.dim);
      const double f = set.radius / n;
      for (std::size_t i = 0; i < set.dim; ++i) x[i] = set.center[i] + f * d[i];
      return x;
    }
    case SetKind::Simplex:
      return project_simplex(v);
  }
  throw ContractViolation("project: unknown set kind");
}

Vector generalized_project(const ConstraintSet& set, const Vector& x_t,
                           const Vector& v, const Metric& metric, double gamma) {
  check_dim(x_t, set.dim, "generalized_project");
  check_dim(v, set.dim, "generalized_project");
  check_finite(x_t, "generalized_project x_t");
  check_finite(v, "generalized_project v");
  MM_CHECK(std::isfinite(gamma) && gamma > 0, "generalized_project: gamma must be positive");
  if (metric.kind == MetricKind::Diagonal)
    MM_CHECK(metric.diag.size() == set.dim, "generalized_project: metric dimension mismatch");

  // unconstrained prox target; the objective equals
  // (1/(2*gamma)) (x-u)' A (x-u) + const around it
  Vector u(set.dim);
  for (std::size_t i = 0; i < set.dim; ++i) u[i] = x_t[i] - gamma * v[i] / metric.entry(i);

  switch (set.kind) {
    case SetKind::Unconstrained:
      return u;
    case SetKind::Box:
      // separable under any diagonal-form metric, so plain clipping is exact
      return project(set, u);
    case SetKind::Ball:
      if (metric.kind == MetricKind::Diagonal) return project_ball_weighted(u, set, metric);
      return project(set, u);
    case SetKind::Simplex:
      if (metric.kind == MetricKind::Diagonal) return project_simplex_weighted(u, metric);
      return project(set, u);
  }
  throw ContractViolation("generalized_project: unknown set kind");
}

double bregman_distance(const Metric& metric, const Vector& x, const Vector& x_t) {
  MM_CHECK(x.size() == x_t.size(), "bregman_distance: dimension mismatch");
  if (metric.kind == MetricKind::Diagonal)
    MM_CHECK(metric.diag.size() == x.size(), "bregman_distance: metric dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - x_t[i];
    s += metric.entry(i) * d * d;
  }
  return 0.5 * s;
}

Vector gradient_mapping(const ConstraintSet& set, const Vector& x_t,
                        const Vector& g, const Metric& metric, double gamma) {
  const Vector xp = generalized_project(set, x_t, g, metric, gamma);
  Vector out(set.dim);
  for (std::size_t i = 0; i < set.dim; ++i) out[i] = (x_t[i] - xp[i]) / gamma;
  return out;
}

}  // namespace minimax
