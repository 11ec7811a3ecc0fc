#include "scatlab/connect.hpp"

#include "scatlab/lightray.hpp"
#include "scatlab/scattering.hpp"

#include <cmath>

namespace scatlab {

ShootingResult shoot(const EndpointMap& endpoint, const Vec& seed, const Vec& target,
                     const ShootingOptions& opts) {
  const int n = static_cast<int>(seed.size());
  ShootingResult out;
  Vec v = seed;
  Vec e = endpoint(v);
  double res = (e - target).norm();
  Mat jac(n, n);
  bool have_jacobian = false;
  int polish = 0;

  for (;;) {
    if (res <= opts.tol && polish >= opts.polish_iter) break;
    if (out.iterations >= opts.max_iter) {
      throw Error(ErrorKind::no_convergence, "Newton shooting exceeded the iteration limit");
    }
    // Once converged, polish with the last Jacobian (chord steps): one flow
    // evaluation per step.
    const bool polishing = res <= opts.tol;
    if (!polishing || !have_jacobian) {
      const double delta = opts.jacobian_step * std::max(1.0, v.norm());
      for (int j = 0; j < n; ++j) {
        Vec vp = v;
        vp(j) += delta;
        jac.col(j) = (endpoint(vp) - e) / delta;
      }
      Eigen::JacobiSVD<Mat> svd(jac);
      const auto& sv = svd.singularValues();
      out.condition = sv(n - 1) > 0.0 ? sv(0) / sv(n - 1) : INFINITY;
      if (out.condition > opts.max_condition) {
        throw Error(ErrorKind::conjugate_point, "shooting Jacobian is ill-conditioned");
      }
      have_jacobian = true;
    }
    const Vec dv = jac.partialPivLu().solve(target - e);
    double t = 1.0;
    Vec v_new = v + dv;
    Vec e_new = endpoint(v_new);
    double res_new = (e_new - target).norm();
    if (polishing) {
      ++out.iterations;
      ++polish;
      if (!(res_new < res)) break;
    } else {
      for (int k = 0; k < 12 && !(res_new < res); ++k) {
        t *= 0.5;
        v_new = v + t * dv;
        e_new = endpoint(v_new);
        res_new = (e_new - target).norm();
      }
      ++out.iterations;
    }
    v = v_new;
    e = e_new;
    res = res_new;
  }
  out.velocity = v;
  out.endpoint = e;
  out.residual = res;
  return out;
}

ConnectingGeodesic connecting_geodesic(const MetricField& g, const Vec& x, const Vec& y,
                                       const std::optional<Vec>& seed,
                                       const ConnectOptions& opts) {
  if ((x - y).norm() == 0.0) throw Error(ErrorKind::precondition, "endpoints coincide");
  if (!g.in_domain(x) || !g.in_domain(y)) throw Error(ErrorKind::chart, "endpoint outside chart");
  const EndpointMap endpoint = [&](const Vec& v) {
    return Vec(integrate_geodesic(g, x, v, StopAtSigma{1.0}, opts.integration).back().x);
  };
  const ShootingResult sol = shoot(endpoint, seed.value_or(Vec(y - x)), y, opts.shooting);
  ConnectingGeodesic c;
  c.path = integrate_geodesic(g, x, sol.velocity, StopAtSigma{1.0}, opts.integration);
  c.x = x;
  c.y = y;
  c.energy = 0.5 * c.path.speed_squared;
  c.causal = causal_classify(g, x, sol.velocity, opts.causal_tol);
  c.iterations = sol.iterations;
  return c;
}

double defining_r(const MetricField& g, const Vec& x, const Vec& y, const std::optional<Vec>& seed,
                  const ConnectOptions& opts) {
  return connecting_geodesic(g, x, y, seed, opts).energy;
}

bool sigma_detect(const MetricField& g, const Vec& x, const Vec& y, double tol,
                  const ConnectOptions& opts) {
  return std::abs(defining_r(g, x, y, std::nullopt, opts)) <= tol;
}

SigmaPair solve_sigma_pair(const MetricField& g, const Vec& x, const Vec& y, double lo, double hi,
                           const std::optional<Vec>& seed, const ConnectOptions& opts,
                           int time_index) {
  if (!(lo < hi)) throw Error(ErrorKind::precondition, "empty bracket");
  Vec yy = y;
  double s = (y(time_index) > lo && y(time_index) < hi) ? y(time_index) : 0.5 * (lo + hi);
  std::optional<Vec> current_seed = seed;
  SigmaPair out;
  out.x = x;
  for (int it = 0; it < 80; ++it) {
    yy(time_index) = s;
    ConnectingGeodesic c = connecting_geodesic(g, x, yy, current_seed, opts);
    current_seed = c.path.front().v;
    const double r = c.energy;
    const Vec& w = c.path.back().v;
    const double dr = inner(g, yy, unit(g.dim, time_index), w);
    const double scale = std::max(1.0, w.squaredNorm());
    out.iterations = it + 1;
    if (std::abs(r) <= 1e-14 * scale) {
      out.y = yy;
      out.connector = std::move(c);
      return out;
    }
    if (dr == 0.0) throw Error(ErrorKind::no_convergence, "flat defining function in time");
    // r decreases in s when dr < 0: a positive r means the root lies above.
    if ((r > 0.0) == (dr < 0.0)) {
      lo = s;
    } else {
      hi = s;
    }
    double s_new = s - r / dr;
    if (!(s_new > lo && s_new < hi)) s_new = 0.5 * (lo + hi);
    if (std::abs(s_new - s) <= 4e-16 * std::max(1.0, std::abs(s)) || hi - lo < 1e-15) {
      // A collapsed bracket with r far from zero means r never changed sign.
      if (std::abs(r) > 1e-10 * scale) {
        throw Error(ErrorKind::no_convergence, "r does not change sign on the time bracket");
      }
      out.y = yy;
      out.connector = std::move(c);
      return out;
    }
    s = s_new;
  }
  throw Error(ErrorKind::no_convergence, "sigma pair search did not converge");
}

MichelResidual michel_check(const MetricField& g, const BoundaryHypersurface& entry,
                            const BoundaryHypersurface& exit, const Vec& x, const Vec& y,
                            const MichelOptions& opts, const std::optional<Vec>& seed) {
  if (!entry.chart || !exit.chart) throw Error(ErrorKind::precondition, "surfaces need charts");
  const ConnectingGeodesic base = connecting_geodesic(g, x, y, seed, opts.connect);
  if (std::abs(base.energy) > opts.sigma_tol) {
    throw Error(ErrorKind::precondition, "pair is not on the lightlike set");
  }
  const Vec base_v = base.path.front().v;
  auto r_at = [&](const Vec& xx, const Vec& yy) {
    return connecting_geodesic(g, xx, yy, base_v, opts.connect).energy;
  };
  const SurfaceChart& cu = *entry.chart;
  const SurfaceChart& cv = *exit.chart;
  const Vec ux = cu.coords(x);
  const Vec uy = cv.coords(y);
  const double h = opts.fd_step;

  MichelResidual out;
  out.grad_x = Vec(ux.size());
  for (int a = 0; a < ux.size(); ++a) {
    Vec up = ux, um = ux;
    up(a) += h;
    um(a) -= h;
    out.grad_x(a) = (r_at(cu.point(up), y) - r_at(cu.point(um), y)) / (2.0 * h);
  }
  out.grad_y = Vec(uy.size());
  for (int a = 0; a < uy.size(); ++a) {
    Vec up = uy, um = uy;
    up(a) += h;
    um(a) -= h;
    out.grad_y(a) = (r_at(x, cv.point(up)) - r_at(x, cv.point(um))) / (2.0 * h);
  }

  const Mat ex = cu.tangents(ux);
  const Mat gx = ex.transpose() * g.eval(x) * ex;
  out.v_proj = -ex * gx.partialPivLu().solve(out.grad_x);
  const ScatteringRecord rec = scatter(g, entry, exit, x, out.v_proj, opts.connect.integration);
  out.position = (rec.y - y).norm();
  out.shot_covector = lower_tangential(g, exit, rec.y, rec.w_proj);
  out.scale = out.grad_y(0) / out.shot_covector(0);
  if (!(out.scale > 0.0)) {
    throw Error(ErrorKind::precondition, "time components disagree in sign");
  }
  out.covector = (out.scale * out.shot_covector - out.grad_y).norm();
  return out;
}

SymTwoTensorField family_derivative(const MetricFamily& family, double tau_step) {
  if (family.derivative_at_0) return *family.derivative_at_0;
  const MetricField plus = family.eval(tau_step);
  const MetricField minus = family.eval(-tau_step);
  return {plus.dim, [plus, minus, tau_step](const Vec& x) {
            return Mat((plus.eval(x) - minus.eval(x)) / (2.0 * tau_step));
          }};
}

LinearizationReport linearize_r(const MetricFamily& family, const Vec& x, const Vec& y,
                                double fd_step, const ConnectOptions& opts,
                                const std::optional<Vec>& seed) {
  const MetricField g0 = family.eval(0.0);
  const ConnectingGeodesic base = connecting_geodesic(g0, x, y, seed, opts);
  const Vec v0 = base.path.front().v;
  const double rp = defining_r(family.eval(fd_step), x, y, v0, opts);
  const double rm = defining_r(family.eval(-fd_step), x, y, v0, opts);
  LinearizationReport rep;
  rep.fd_value = (rp - rm) / (2.0 * fd_step);
  rep.lrt_value = light_ray_transform(family_derivative(family), base.path);
  rep.kappa = 0.5;
  rep.rel_error = std::abs(rep.fd_value - rep.kappa * rep.lrt_value) /
                  std::max(std::abs(rep.kappa * rep.lrt_value), kLinearizationFloor);
  return rep;
}

}  // namespace scatlab
