#include "scatlab/flow.hpp"
#include "scatlab/geometry.hpp"

#include <cmath>
#include <sstream>

namespace scatlab {
namespace {

double matrix_scale(const Mat& m) { return std::max(1e-300, m.cwiseAbs().maxCoeff()); }

void check_nonsingular(const Mat& gx) {
  const double scale = matrix_scale(gx);
  const double det = std::abs(gx.determinant());
  if (det == 0.0 || det < 1e-12 * std::pow(scale, static_cast<double>(gx.rows()))) {
    throw Error(ErrorKind::singular_metric, "|det g| below 1e-12 * scale");
  }
}

std::string fmt_point(const Vec& x) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x(i);
  os << ")";
  return os.str();
}

}  // namespace

double inner(const MetricField& g, const Vec& x, const Vec& u, const Vec& w) {
  if (!g.in_domain(x)) throw Error(ErrorKind::chart, "point " + fmt_point(x) + " outside chart");
  return u.dot(g.eval(x) * w);
}

void validate_metric(const MetricField& g, const Vec& x) {
  if (!g.in_domain(x)) throw Error(ErrorKind::chart, "point " + fmt_point(x) + " outside chart");
  const Mat gx = g.eval(x);
  if (gx.rows() != g.dim || gx.cols() != g.dim) {
    throw Error(ErrorKind::precondition, "metric evaluator returned wrong shape");
  }
  const double scale = matrix_scale(gx);
  if ((gx - gx.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorKind::precondition, "metric not symmetric at " + fmt_point(x));
  }
  check_nonsingular(gx);
  Eigen::SelfAdjointEigenSolver<Mat> eig(gx);
  int negative = 0;
  for (int i = 0; i < g.dim; ++i) negative += eig.eigenvalues()(i) < 0.0 ? 1 : 0;
  const int expected = g.signature == Signature::lorentzian ? 1 : 0;
  if (negative != expected) {
    throw Error(ErrorKind::signature, "eigenvalue sign count mismatch at " + fmt_point(x));
  }
}

MetricDerivative metric_derivative(const MetricField& g, const Vec& x) {
  if (g.deriv) return g.deriv(x);
  MetricDerivative d;
  const double h = 1e-5 * std::max(1.0, x.norm());
  Vec xp = x, xm = x;
  for (int k = 0; k < g.dim; ++k) {
    xp(k) = x(k) + h;
    xm(k) = x(k) - h;
    d.partials[k] = (g.eval(xp) - g.eval(xm)) / (2.0 * h);
    xp(k) = xm(k) = x(k);
  }
  return d;
}

Christoffel christoffel(const MetricField& g, const Vec& x) {
  const int n = g.dim;
  const Mat gx = g.eval(x);
  check_nonsingular(gx);
  const Mat ginv = gx.inverse();
  const MetricDerivative d = metric_derivative(g, x);
  // First kind: lower(l, i, j) = 1/2 (d_i g_lj + d_j g_li - d_l g_ij).
  std::array<Mat, kMaxDim> lower;
  for (int l = 0; l < n; ++l) {
    lower[l] = Mat(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const double v = 0.5 * (d.partials[i](l, j) + d.partials[j](l, i) - d.partials[l](i, j));
        lower[l](i, j) = v;
        lower[l](j, i) = v;
      }
    }
  }
  Christoffel gamma;
  gamma.dim = n;
  for (int k = 0; k < n; ++k) {
    gamma.symbols[k] = Mat::Zero(n, n);
    for (int l = 0; l < n; ++l) gamma.symbols[k] += ginv(k, l) * lower[l];
  }
  return gamma;
}

Vec geodesic_acceleration(const MetricField& g, const Vec& x, const Vec& v) {
  const int n = g.dim;
  const Mat gx = g.eval(x);
  const MetricDerivative d = metric_derivative(g, x);
  // w_l = (d_i g_lj - 1/2 d_l g_ij) v^i v^j
  Vec dv = Vec::Zero(n);  // (d_v g) v, i.e. sum_i v^i d_i g
  Mat dg_v = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) dg_v += v(i) * d.partials[i];
  dv = dg_v * v;
  Vec w(n);
  for (int l = 0; l < n; ++l) w(l) = dv(l) - 0.5 * v.dot(d.partials[l] * v);
  check_nonsingular(gx);
  return -gx.partialPivLu().solve(w);
}

const char* to_string(Causal c) {
  switch (c) {
    case Causal::timelike: return "timelike";
    case Causal::lightlike: return "lightlike";
    case Causal::spacelike: return "spacelike";
  }
  return "?";
}

CausalClass causal_classify(const MetricField& g, const Vec& x, const Vec& v, double tol) {
  CausalClass c;
  c.quadratic_form_value = inner(g, x, v, v);
  c.tolerance = tol * v.squaredNorm();
  if (c.quadratic_form_value < -c.tolerance) {
    c.tag = Causal::timelike;
  } else if (c.quadratic_form_value > c.tolerance) {
    c.tag = Causal::spacelike;
  } else {
    c.tag = Causal::lightlike;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Flow integration

State make_state(const Vec& x, const Vec& fiber, std::optional<double> aux) {
  const int n = static_cast<int>(x.size());
  State s(2 * n + (aux ? 1 : 0));
  s.head(n) = x;
  s.segment(n, n) = fiber;
  if (aux) s(2 * n) = *aux;
  return s;
}

State rk4_step(const FlowSystem& sys, const State& s, double h) {
  const State k1 = sys.rhs(s);
  const State k2 = sys.rhs(s + 0.5 * h * k1);
  const State k3 = sys.rhs(s + 0.5 * h * k2);
  const State k4 = sys.rhs(s + h * k3);
  return s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace {

PathSample to_sample(const FlowSystem& sys, double sigma, const State& s) {
  PathSample p;
  p.sigma = sigma;
  p.x = s.head(sys.dim);
  p.v = s.segment(sys.dim, sys.dim);
  p.aux = sys.aux ? s(2 * sys.dim) : 0.0;
  return p;
}

void check_domain(const FlowSystem& sys, const State& s, const GeodesicPath& path) {
  if (sys.domain && !sys.domain(Vec(s.head(sys.dim)))) {
    throw TruncationError("integration left the chart domain", path);
  }
}

// Refines the crossing inside one step [0, h] from state `s`, where the
// signed exterior function goes from negative to non-negative.
std::pair<double, State> refine_crossing(const FlowSystem& sys, const State& s, double h,
                                         const BoundaryHypersurface& surf, double sigma0,
                                         double tol) {
  auto eval = [&](double d) {
    State sd = rk4_step(sys, s, d);
    return std::pair<State, double>(sd, surf.signed_exterior(Vec(sd.head(sys.dim))));
  };
  double lo = 0.0, hi = h;
  for (int it = 0; it < 60 && hi - lo > 1e-17 * std::max(1.0, sigma0); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (eval(mid).second < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double d = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    auto [sd, f] = eval(d);
    const Vec xdot = sys.rhs(sd).head(sys.dim);
    const double df = surf.exterior_sign * surf.gradient(Vec(sd.head(sys.dim))).dot(xdot);
    if (df == 0.0 || f == 0.0) break;
    d = std::clamp(d - f / df, 0.0, h);
  }
  State final_state = rk4_step(sys, s, d);
  const double b = surf.defining(Vec(final_state.head(sys.dim)));
  if (std::abs(b) > tol) {
    throw Error(ErrorKind::no_convergence, "boundary hit refinement did not reach the surface");
  }
  return {sigma0 + d, final_state};
}

}  // namespace

GeodesicPath integrate_flow(const FlowSystem& sys, const State& s0, const StopCondition& stop,
                            const IntegrationOptions& opts) {
  GeodesicPath path;
  if (!s0.allFinite()) throw Error(ErrorKind::precondition, "non-finite initial state");
  path.samples.push_back(to_sample(sys, 0.0, s0));
  check_domain(sys, s0, path);

  if (const auto* at = std::get_if<StopAtSigma>(&stop)) {
    if (!(at->sigma_max > 0.0)) throw Error(ErrorKind::precondition, "sigma_max must be positive");
    const double ratio = at->sigma_max / opts.step;
    const long n = std::max(1L, static_cast<long>(std::ceil(ratio - 1e-9)));
    if (n > opts.max_steps) throw Error(ErrorKind::non_terminating, "step count exceeded");
    const double h = at->sigma_max / static_cast<double>(n);
    path.samples.reserve(static_cast<std::size_t>(n) + 1);
    State s = s0;
    for (long i = 1; i <= n; ++i) {
      s = rk4_step(sys, s, h);
      check_domain(sys, s, path);
      const double sigma = (i == n) ? at->sigma_max : static_cast<double>(i) * h;
      path.samples.push_back(to_sample(sys, sigma, s));
    }
    return path;
  }

  const BoundaryHypersurface& surf = *std::get<StopAtSurface>(stop).surface;
  const double h = opts.step;
  State s = s0;
  double sigma = 0.0;
  double f_prev = surf.signed_exterior(Vec(s.head(sys.dim)));
  for (long i = 1;; ++i) {
    if (i > opts.max_steps) throw Error(ErrorKind::non_terminating, "step count exceeded");
    if (sigma > opts.sigma_budget) {
      throw Error(ErrorKind::escape, "ray did not meet the target surface within the budget");
    }
    State next = rk4_step(sys, s, h);
    check_domain(sys, next, path);
    const double f_next = surf.signed_exterior(Vec(next.head(sys.dim)));
    if (f_prev < 0.0 && f_next >= 0.0) {
      auto [sigma_hit, s_hit] = refine_crossing(sys, s, h, surf, sigma, opts.surface_tol);
      path.samples.push_back(to_sample(sys, sigma_hit, s_hit));
      return path;
    }
    s = next;
    sigma = static_cast<double>(i) * h;
    f_prev = f_next;
    path.samples.push_back(to_sample(sys, sigma, s));
  }
}

FlowSystem geodesic_system(const MetricField& g) {
  FlowSystem sys;
  sys.dim = g.dim;
  sys.domain = g.domain;
  const int n = g.dim;
  sys.rhs = [&g, n](const State& s) {
    State ds(s.size());
    const Vec x = s.head(n);
    const Vec v = s.segment(n, n);
    ds.head(n) = v;
    ds.segment(n, n) = geodesic_acceleration(g, x, v);
    return ds;
  };
  return sys;
}

GeodesicPath integrate_geodesic(const MetricField& g, const Vec& x0, const Vec& v0,
                                const StopCondition& stop, const IntegrationOptions& opts) {
  if (x0.size() != g.dim || v0.size() != g.dim) {
    throw Error(ErrorKind::precondition, "initial data dimension mismatch");
  }
  if (!x0.allFinite() || !v0.allFinite()) {
    throw Error(ErrorKind::precondition, "non-finite initial data");
  }
  GeodesicPath path = integrate_flow(geodesic_system(g), make_state(x0, v0), stop, opts);
  path.speed_squared = inner(g, x0, v0, v0);
  return path;
}

// ---------------------------------------------------------------------------
// Boundary geometry

Vec boundary_normal(const BoundaryHypersurface& s, const MetricField& g, const Vec& x) {
  const Vec db = s.gradient(x);
  const Mat gx = g.eval(x);
  check_nonsingular(gx);
  const Vec n = gx.partialPivLu().solve(db);
  const double q = db.dot(n);
  if (std::abs(q) < 1e-14 * std::max(1.0, db.squaredNorm())) {
    throw Error(ErrorKind::singular_metric, "degenerate induced metric on the boundary");
  }
  const bool timelike_surface = q > 0.0;
  if (timelike_surface != (s.causal_type == SurfaceType::timelike)) {
    throw Error(ErrorKind::signature, "surface causal type does not match the metric");
  }
  Vec nu = n / std::sqrt(std::abs(q));
  if (s.exterior_sign * db.dot(nu) < 0.0) nu = -nu;
  return nu;
}

Vec boundary_project(const MetricField& g, const BoundaryHypersurface& s, const Vec& x,
                     const Vec& v) {
  const Vec nu = boundary_normal(s, g, x);
  const Mat gx = g.eval(x);
  const double eps = nu.dot(gx * nu);
  return v - (v.dot(gx * nu) / eps) * nu;
}

Vec lightlike_completion(const MetricField& g, const BoundaryHypersurface& s, const Vec& x,
                         const Vec& v_proj, int orientation) {
  if (orientation != 1 && orientation != -1) {
    throw Error(ErrorKind::precondition, "orientation must be +1 or -1");
  }
  const Vec nu = boundary_normal(s, g, x);
  const Mat gx = g.eval(x);
  const double eps = nu.dot(gx * nu);
  const double normal_part = v_proj.dot(gx * nu);
  if (std::abs(normal_part) > 1e-8 * std::max(1.0, v_proj.norm())) {
    throw Error(ErrorKind::precondition, "v' is not tangent to the surface");
  }
  const double q = v_proj.dot(gx * v_proj);
  const double a2 = -eps * q;
  if (!(a2 > 0.0)) {
    throw Error(ErrorKind::no_lift, "projected vector admits no lightlike lift");
  }
  return v_proj + static_cast<double>(orientation) * std::sqrt(a2) * nu;
}

void check_transversal(const MetricField& g, const BoundaryHypersurface& s, const Vec& x,
                       const Vec& v, double rel_tol) {
  const Vec nu = boundary_normal(s, g, x);
  if (std::abs(inner(g, x, v, nu)) < rel_tol * v.norm()) {
    throw Error(ErrorKind::tangency, "ray is tangent to the boundary");
  }
}

Mat induced_metric(const MetricField& g, const SurfaceChart& chart, const Vec& u) {
  const Vec x = chart.point(u);
  const Mat e = chart.tangents(u);
  return e.transpose() * g.eval(x) * e;
}

}  // namespace scatlab
