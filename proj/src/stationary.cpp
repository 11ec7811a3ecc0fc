#include "scatlab/stationary.hpp"

#include "scatlab/lightray.hpp"
#include "scatlab/scattering.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>

namespace scatlab {

StationaryMetric make_stationary(ScalarField lambda, CovectorField omega, MetricField base) {
  const int n = base.dim;
  StationaryMetric m;
  m.lambda = std::move(lambda);
  m.omega = std::move(omega);
  m.base = std::move(base);

  MetricField g;
  g.dim = n + 1;
  g.signature = Signature::lorentzian;
  if (m.base.domain) {
    g.domain = [dom = m.base.domain, n](const Vec& x) { return dom(Vec(x.tail(n))); };
  }
  g.eval = [lam = m.lambda, om = m.omega, h = m.base, n](const Vec& X) {
    const Vec x = X.tail(n);
    const double l = lam(x);
    const Vec w = om(x);
    Mat out(n + 1, n + 1);
    out(0, 0) = -l;
    out.block(0, 1, 1, n) = -l * w.transpose();
    out.block(1, 0, n, 1) = -l * w;
    out.block(1, 1, n, n) = l * (h.eval(x) - w * w.transpose());
    return out;
  };
  g.deriv = [lam = m.lambda, om = m.omega, h = m.base, n](const Vec& X) {
    const Vec x = X.tail(n);
    const double l = lam(x);
    const Vec dl = gradient_of(lam, x);
    const Vec w = om(x);
    const Mat jw = jacobian_of(om, x);
    const Mat hx = h.eval(x);
    const MetricDerivative dh = metric_derivative(h, x);
    MetricDerivative out;
    out.partials[0] = Mat::Zero(n + 1, n + 1);
    for (int k = 0; k < n; ++k) {
      const Vec dw = jw.row(k).transpose();
      Mat p(n + 1, n + 1);
      p(0, 0) = -dl(k);
      const Vec top = -dl(k) * w - l * dw;
      p.block(0, 1, 1, n) = top.transpose();
      p.block(1, 0, n, 1) = top;
      p.block(1, 1, n, n) = dl(k) * (hx - w * w.transpose()) +
                            l * (dh.partials[k] - dw * w.transpose() - w * dw.transpose());
      out.partials[k + 1] = p;
    }
    return out;
  };
  m.assembled = std::move(g);
  return m;
}

Mat raw_matrix(const ScalarField& lambda, const CovectorField& omega_raw, const MetricField& h_raw,
               const Vec& x) {
  const int n = h_raw.dim;
  Mat out(n + 1, n + 1);
  const Vec wr = omega_raw(x);
  out(0, 0) = -lambda(x);
  out.block(0, 1, 1, n) = wr.transpose();
  out.block(1, 0, n, 1) = wr;
  out.block(1, 1, n, n) = h_raw.eval(x);
  return out;
}

StationaryMetric from_raw(const ScalarField& lambda, const CovectorField& omega_raw,
                          const MetricField& h_raw) {
  CovectorField omega{omega_raw.dim, [lambda, omega_raw](const Vec& x) {
                        return Vec(-omega_raw(x) / lambda(x));
                      }};
  MetricField h;
  h.dim = h_raw.dim;
  h.signature = Signature::riemannian;
  h.domain = h_raw.domain;
  h.eval = [lambda, omega_raw, h_raw](const Vec& x) {
    const double l = lambda(x);
    if (!(l > 0.0)) throw Error(ErrorKind::precondition, "lambda must be positive");
    const Vec wr = omega_raw(x);
    const Mat out = h_raw.eval(x) / l + wr * wr.transpose() / (l * l);
    Eigen::LLT<Mat> llt(out);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorKind::not_positive_definite, "completed base metric is not positive definite");
    }
    return out;
  };
  return make_stationary(lambda, std::move(omega), std::move(h));
}

StationaryMetric conformal_normalize(const StationaryMetric& m) {
  return make_stationary(constant_scalar(1.0), m.omega, m.base);
}

StationaryMetric conformal_scale(const StationaryMetric& m, const ScalarField& mu) {
  ScalarField lam;
  lam.positive = true;
  lam.eval = [a = m.lambda, b = mu](const Vec& x) { return a(x) * b(x); };
  lam.gradient = [a = m.lambda, b = mu](const Vec& x) {
    return Vec(gradient_of(a, x) * b(x) + a(x) * gradient_of(b, x));
  };
  return make_stationary(std::move(lam), m.omega, m.base);
}

double time_invariant(const StationaryMetric& m, const Vec& x, const Vec& v) {
  const int n = m.base.dim;
  return v(0) + m.omega(Vec(x.tail(n))).dot(v.tail(n));
}

// ---------------------------------------------------------------------------

Mat MagneticSystem::two_form(const Vec& x) const {
  const Mat j = jacobian_of(omega, x);
  return j - j.transpose();
}

Vec MagneticSystem::lorentz_force(const Vec& x, const Vec& u) const {
  const Mat hx = base.eval(x);
  Eigen::FullPivLU<Mat> lu(hx);
  if (!lu.isInvertible()) throw Error(ErrorKind::singular_metric, "singular base metric");
  return lu.solve(two_form(x).transpose() * u);
}

MagneticSystem magnetic_system(const StationaryMetric& m) { return {m.base, m.omega}; }

FlowSystem magnetic_flow(const MagneticSystem& mag, double k, bool homogeneous) {
  FlowSystem sys;
  const int n = mag.base.dim;
  sys.dim = n;
  sys.aux = 1;
  sys.domain = mag.base.domain;
  sys.rhs = [mag, n, k, homogeneous](const State& s) {
    const Vec x = s.head(n);
    const Vec u = s.segment(n, n);
    const double factor = homogeneous ? std::sqrt(inner(mag.base, x, u, u)) : k;
    State ds(s.size());
    ds.head(n) = u;
    ds.segment(n, n) = geodesic_acceleration(mag.base, x, u) + factor * mag.lorentz_force(x, u);
    ds(2 * n) = mag.omega(x).dot(u);
    return ds;
  };
  return sys;
}

GeodesicPath magnetic_integrate(const MagneticSystem& mag, const Vec& x0, const Vec& u0,
                                const StopCondition& stop, const IntegrationOptions& opts) {
  const double speed2 = inner(mag.base, x0, u0, u0);
  if (std::abs(std::sqrt(speed2) - 1.0) > 1e-10) {
    throw Error(ErrorKind::precondition, "magnetic entry must have unit speed");
  }
  GeodesicPath path = integrate_flow(magnetic_flow(mag), make_state(x0, u0, 0.0), stop, opts);
  path.speed_squared = speed2;
  return path;
}

MagneticRecord magnetic_scatter(const MagneticSystem& mag, const BoundaryHypersurface& boundary,
                                const Vec& x, const Vec& u_proj, const IntegrationOptions& opts) {
  if (std::abs(boundary.defining(x)) > opts.surface_tol) {
    throw Error(ErrorKind::precondition, "entry point is not on the boundary");
  }
  const Vec nu = boundary_normal(boundary, mag.base, x);
  if (std::abs(inner(mag.base, x, u_proj, nu)) > 1e-8 * std::max(1.0, u_proj.norm())) {
    throw Error(ErrorKind::precondition, "u' is not tangent to the boundary");
  }
  const double rest = 1.0 - inner(mag.base, x, u_proj, u_proj);
  if (!(rest > 0.0)) throw Error(ErrorKind::no_lift, "no inward unit completion");
  const Vec u = u_proj - std::sqrt(rest) * nu;
  check_transversal(mag.base, boundary, x, u);

  MagneticRecord rec;
  rec.path = magnetic_integrate(mag, x, u, StopAtSurface{&boundary}, opts);
  const PathSample& last = rec.path.back();
  check_transversal(mag.base, boundary, last.x, last.v);
  rec.x = x;
  rec.u_proj = u_proj;
  rec.y = last.x;
  rec.w_proj = boundary_project(mag.base, boundary, last.x, last.v);
  rec.length = last.sigma;
  rec.flux = last.aux;
  rec.action = rec.length - rec.flux;
  return rec;
}

MagneticConnector magnetic_connector(const MagneticSystem& mag, const Vec& x, const Vec& y,
                                     const std::optional<Vec>& seed, const ConnectOptions& opts) {
  if ((x - y).norm() == 0.0) throw Error(ErrorKind::precondition, "endpoints coincide");
  const FlowSystem sys = magnetic_flow(mag, 1.0, true);
  const EndpointMap endpoint = [&](const Vec& v) {
    const GeodesicPath p = integrate_flow(sys, make_state(x, v, 0.0), StopAtSigma{1.0},
                                          opts.integration);
    return Vec(p.back().x);
  };
  const ShootingResult sol = shoot(endpoint, seed.value_or(Vec(y - x)), y, opts.shooting);
  MagneticConnector c;
  c.velocity = sol.velocity;
  c.path = integrate_flow(sys, make_state(x, sol.velocity, 0.0), StopAtSigma{1.0},
                          opts.integration);
  c.path.speed_squared = inner(mag.base, x, sol.velocity, sol.velocity);
  c.length = std::sqrt(c.path.speed_squared);
  c.flux = c.path.back().aux;
  c.action = c.length - c.flux;
  c.iterations = sol.iterations;
  return c;
}

double action_A(const MagneticSystem& mag, const Vec& x, const Vec& y,
                const std::optional<Vec>& seed, const ConnectOptions& opts) {
  return magnetic_connector(mag, x, y, seed, opts).action;
}

// ---------------------------------------------------------------------------

ProjectionResiduals project_and_verify(const StationaryMetric& m, const GeodesicPath& path) {
  const int n = m.base.dim;
  const MagneticSystem mag = magnetic_system(m);
  const auto& s = path.samples;
  ProjectionResiduals out;
  out.k = time_invariant(m, s.front().x, s.front().v);
  {
    const Vec x = s.front().x.tail(n);
    const Vec u = s.front().v.tail(n);
    out.speed = std::sqrt(inner(m.base, x, u, u));
  }
  for (const auto& p : s) {
    out.k_drift = std::max(out.k_drift, std::abs(time_invariant(m, p.x, p.v) - out.k));
  }
  // Fourth-order central differences of the sampled velocities give x''
  // independently of the spacetime right-hand side.
  if (s.size() >= 5) {
    const double h = s[1].sigma - s[0].sigma;
    for (std::size_t i = 2; i + 2 < s.size(); ++i) {
      const Vec acc = (-s[i + 2].v + 8.0 * s[i + 1].v - 8.0 * s[i - 1].v + s[i - 2].v) / (12.0 * h);
      const Vec x = s[i].x.tail(n);
      const Vec u = s[i].v.tail(n);
      const double k = time_invariant(m, s[i].x, s[i].v);
      const Vec cov = Vec(acc.tail(n)) - geodesic_acceleration(m.base, x, u);
      const Vec r = cov - k * mag.lorentz_force(x, u);
      out.ode_residual = std::max(out.ode_residual, std::sqrt(inner(m.base, x, r, r)));
    }
  }
  return out;
}

GeodesicPath lift_magnetic(const StationaryMetric& m, const GeodesicPath& base_path, double t0) {
  const int n = m.base.dim;
  GeodesicPath out;
  out.samples.reserve(base_path.samples.size());
  for (const auto& p : base_path.samples) {
    PathSample q;
    q.sigma = p.sigma;
    q.x = Vec(n + 1);
    q.x(0) = t0 + p.sigma - p.aux;
    q.x.tail(n) = p.x;
    q.v = Vec(n + 1);
    q.v(0) = 1.0 - m.omega(p.x).dot(p.v);
    q.v.tail(n) = p.v;
    out.samples.push_back(std::move(q));
  }
  out.speed_squared = inner(m.assembled, out.front().x, out.front().v, out.front().v);
  return out;
}

BoundaryHypersurface cylinder_over(const BoundaryHypersurface& b) {
  const int n = b.dim;
  BoundaryHypersurface s;
  s.dim = n + 1;
  s.causal_type = SurfaceType::timelike;
  s.exterior_sign = b.exterior_sign;
  s.defining = [f = b.defining, n](const Vec& X) { return f(Vec(X.tail(n))); };
  s.gradient = [f = b.gradient, n](const Vec& X) {
    Vec out = Vec::Zero(n + 1);
    out.tail(n) = f(Vec(X.tail(n)));
    return out;
  };
  if (b.chart) {
    const SurfaceChart c = *b.chart;
    SurfaceChart ch;
    ch.point = [c, n](const Vec& u) {
      Vec X(n + 1);
      X(0) = u(0);
      X.tail(n) = c.point(Vec(u.tail(n - 1)));
      return X;
    };
    ch.tangents = [c, n](const Vec& u) {
      Mat e = Mat::Zero(n + 1, n);
      e(0, 0) = 1.0;
      e.block(1, 1, n, n - 1) = c.tangents(Vec(u.tail(n - 1)));
      return e;
    };
    ch.coords = [c, n](const Vec& X) {
      Vec u(n);
      u(0) = X(0);
      u.tail(n - 1) = c.coords(Vec(X.tail(n)));
      return u;
    };
    s.chart = std::move(ch);
  }
  return s;
}

ThmMagResiduals thmmag_verify(const StationaryMetric& m, const BoundaryHypersurface& base_boundary,
                              const Vec& x, const Vec& v_proj, const ConnectOptions& opts) {
  const int n = m.base.dim;
  const BoundaryHypersurface cyl = cylinder_over(base_boundary);
  const MagneticSystem mag = magnetic_system(m);
  if (std::abs(m.lambda(Vec(x.tail(n))) - 1.0) > 1e-12) {
    throw Error(ErrorKind::precondition, "normalize lambda to 1 first");
  }
  if (std::abs(time_invariant(m, x, v_proj) - 1.0) > 1e-10) {
    throw Error(ErrorKind::precondition, "entry must have unit time component");
  }
  ThmMagResiduals out;
  out.lorentzian = scatter(m.assembled, cyl, cyl, x, v_proj, opts.integration);
  out.magnetic = magnetic_scatter(mag, base_boundary, Vec(x.tail(n)), Vec(v_proj.tail(n)),
                                  opts.integration);
  const ScatteringRecord& L = out.lorentzian;
  const MagneticRecord& M = out.magnetic;
  out.exit = (Vec(L.y.tail(n)) - M.y).norm() + (Vec(L.w_proj.tail(n)) - M.w_proj).norm();
  const double elapsed = L.y(0) - x(0);
  out.length = std::abs(M.length - (elapsed + M.flux));

  const Vec seed = M.length * M.path.front().v;
  const MagneticConnector conn =
      magnetic_connector(mag, Vec(x.tail(n)), Vec(L.y.tail(n)), seed, opts);
  out.connector_action = conn.action;
  out.action = std::abs(conn.action - elapsed);
  out.exit_time_component = std::abs(time_invariant(m, L.y, L.w_proj) - 1.0);

  // S rebuilt from the magnetic record and the action.
  Vec y_rebuilt(n + 1), w_rebuilt(n + 1);
  y_rebuilt(0) = x(0) + conn.action;
  y_rebuilt.tail(n) = M.y;
  w_rebuilt(0) = 1.0 - m.omega(M.y).dot(M.w_proj);
  w_rebuilt.tail(n) = M.w_proj;
  out.round_trip = (y_rebuilt - L.y).norm() + (w_rebuilt - L.w_proj).norm();
  return out;
}

MagneticMichelResidual magnetic_michel(const MagneticSystem& mag,
                                       const BoundaryHypersurface& boundary, const Vec& x,
                                       const Vec& y, double fd_step, const ConnectOptions& opts) {
  if (!boundary.chart) throw Error(ErrorKind::precondition, "boundary needs a chart");
  const SurfaceChart& ch = *boundary.chart;
  const MagneticConnector conn = magnetic_connector(mag, x, y, std::nullopt, opts);
  const Vec seed = conn.velocity;
  auto action = [&](const Vec& a, const Vec& b) { return action_A(mag, a, b, seed, opts); };

  const Vec ux = ch.coords(x), uy = ch.coords(y);
  Vec gx(ux.size()), gy(uy.size());
  for (int a = 0; a < ux.size(); ++a) {
    Vec p = ux, q = ux;
    p(a) += fd_step;
    q(a) -= fd_step;
    gx(a) = (action(ch.point(p), y) - action(ch.point(q), y)) / (2.0 * fd_step);
  }
  for (int a = 0; a < uy.size(); ++a) {
    Vec p = uy, q = uy;
    p(a) += fd_step;
    q(a) -= fd_step;
    gy(a) = (action(x, ch.point(p)) - action(x, ch.point(q))) / (2.0 * fd_step);
  }
  const Vec u_in = conn.velocity / conn.length;
  const Vec u_out = conn.path.back().v / conn.length;
  const Mat ex = ch.tangents(ux), ey = ch.tangents(uy);
  MagneticMichelResidual out;
  out.entry = (ex.transpose() * (mag.base.eval(x) * u_in) -
               (-gx + ex.transpose() * mag.omega(x)))
                  .norm();
  out.exit = (ey.transpose() * (mag.base.eval(y) * u_out) -
              (gy + ey.transpose() * mag.omega(y)))
                 .norm();
  return out;
}

SymTwoTensorField stationary_variation(const StationaryMetric& m, const SymTwoTensorField& delta_h,
                                       const CovectorField& delta_omega) {
  const int n = m.base.dim;
  return {n + 1, [m, delta_h, delta_omega, n](const Vec& X) {
            const Vec x = X.tail(n);
            const Vec w = m.omega(x);
            const Vec dw = delta_omega(x);
            Mat f(n + 1, n + 1);
            f(0, 0) = 0.0;
            f.block(0, 1, 1, n) = -dw.transpose();
            f.block(1, 0, n, 1) = -dw;
            f.block(1, 1, n, n) = delta_h(x) - w * dw.transpose() - dw * w.transpose();
            return Mat(m.lambda(x) * f);
          }};
}

EquivalenceReport linearization_equivalence(const StationaryMetric& m,
                                            const SymTwoTensorField& delta_h,
                                            const CovectorField& delta_omega, const Vec& x,
                                            const Vec& y, double t0, const ConnectOptions& opts) {
  const int n = m.base.dim;
  const MagneticSystem mag = magnetic_system(m);
  const MagneticConnector conn = magnetic_connector(mag, x, y, std::nullopt, opts);
  const double ell = conn.length;

  // Unit-speed base path with the same node count as the [0, 1] connector.
  const long nodes = static_cast<long>(std::ceil(1.0 / opts.integration.step - 1e-9));
  IntegrationOptions unit_opts = opts.integration;
  unit_opts.step = ell / static_cast<double>(nodes);
  const GeodesicPath unit_path =
      magnetic_integrate(mag, x, conn.velocity / ell, StopAtSigma{ell}, unit_opts);

  const SymTwoTensorField half_dh{n, [delta_h](const Vec& p) { return Mat(0.5 * delta_h(p)); }};
  const CovectorField minus_dw{n, [delta_omega](const Vec& p) { return Vec(-delta_omega(p)); }};
  EquivalenceReport rep;
  rep.length = ell;
  rep.magnetic_value = magnetic_linearized_transform(half_dh, minus_dw, m.base, unit_path);

  Vec X(n + 1), Y(n + 1), seed(n + 1);
  X << t0, x;
  Y << t0 + conn.action, y;
  seed << ell - m.omega(x).dot(conn.velocity), conn.velocity;
  const ConnectingGeodesic lc = connecting_geodesic(m.assembled, X, Y, seed, opts);
  const SymTwoTensorField f = stationary_variation(m, delta_h, delta_omega);
  rep.lorentzian_value = light_ray_transform(f, lc.path);
  rep.ratio = rep.magnetic_value != 0.0 ? rep.lorentzian_value / rep.magnetic_value : 0.0;

  const auto& ls = lc.path.samples;
  const auto& ms = unit_path.samples;
  if (ls.size() != ms.size()) {
    throw Error(ErrorKind::precondition, "node counts of the two parametrizations differ");
  }
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const double lhs = ls[i].v.dot(f(ls[i].x) * ls[i].v);
    const Vec& u = ms[i].v;
    const double rhs =
        2.0 * ell * ell * (u.dot(half_dh(ms[i].x) * u) + minus_dw(ms[i].x).dot(u));
    worst = std::max(worst, std::abs(lhs - rhs));
    scale = std::max(scale, std::abs(rhs));
  }
  rep.pointwise = worst / std::max(scale, 1e-12);
  const double expected = 2.0 * ell * rep.magnetic_value;
  rep.integrated = std::abs(rep.lorentzian_value - expected) / std::max(std::abs(expected), 1e-12);
  const double squared = 2.0 * ell * ell * rep.magnetic_value;
  rep.integrated_l2 = std::abs(rep.lorentzian_value - squared) / std::max(std::abs(squared), 1e-12);
  return rep;
}

NormalGauge boundary_normal_coords(const CovectorField& omega, int normal_index) {
  NormalGauge out;
  out.phi.eval = [omega, normal_index](const Vec& x) {
    const double top = x(normal_index);
    if (top == 0.0) return 0.0;
    auto integrand = [&](double s) {
      Vec p = x;
      p(normal_index) = s;
      return omega(p)(normal_index);
    };
    const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(top) / 0.1)));
    double sum = 0.0;
    for (int i = 0; i < panels; ++i) {
      const double a = top * i / panels, b = top * (i + 1) / panels;
      sum += boost::math::quadrature::gauss<double, 10>::integrate(integrand, a, b);
    }
    return sum;
  };
  out.transformed = {omega.dim, [omega, phi = out.phi](const Vec& x) {
                       return Vec(omega(x) - fd_gradient(phi.eval, x));
                     }};
  return out;
}

}  // namespace scatlab
