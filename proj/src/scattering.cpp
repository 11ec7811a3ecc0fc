#include "scatlab/scattering.hpp"

#include <cmath>

namespace scatlab {
namespace {

double surface_residual(const BoundaryHypersurface& s, const Vec& x) {
  return std::abs(s.defining(x));
}

ScatteringRecord record_from_path(const MetricField& g, const BoundaryHypersurface& exit,
                                  const Vec& x, const Vec& v_proj, const Vec& v_full,
                                  const GeodesicPath& path) {
  const PathSample& last = path.back();
  check_transversal(g, exit, last.x, last.v);
  ScatteringRecord rec;
  rec.x = x;
  rec.v_proj = v_proj;
  rec.v_full = v_full;
  rec.y = last.x;
  rec.w_full = last.v;
  rec.w_proj = boundary_project(g, exit, last.x, last.v);
  rec.travel = last.sigma;
  return rec;
}

}  // namespace

ScatteringRecord scatter(const MetricField& g, const BoundaryHypersurface& entry,
                         const BoundaryHypersurface& exit, const Vec& x, const Vec& v_proj,
                         const IntegrationOptions& opts) {
  if (surface_residual(entry, x) > opts.surface_tol) {
    throw Error(ErrorKind::precondition, "entry point is not on the entry surface");
  }
  validate_metric(g, x);
  const Vec v = lightlike_completion(g, entry, x, v_proj, -1);
  check_transversal(g, entry, x, v);
  const GeodesicPath path = integrate_geodesic(g, x, v, StopAtSurface{&exit}, opts);
  return record_from_path(g, exit, x, v_proj, v, path);
}

std::pair<ScatteringRecord, GeodesicPath> trace_ray(const MetricField& g,
                                                    const BoundaryHypersurface& entry,
                                                    const BoundaryHypersurface& exit,
                                                    const Vec& x, const Vec& v_proj,
                                                    const IntegrationOptions& opts) {
  ScatteringRecord rec = scatter(g, entry, exit, x, v_proj, opts);
  GeodesicPath path = integrate_geodesic(g, x, rec.v_full, StopAtSigma{rec.travel}, opts);
  return {std::move(rec), std::move(path)};
}

double normalization_functional(const MetricField& g, const Vec& x, const Vec& v_proj,
                                ReducedMode mode) {
  switch (mode) {
    case ReducedMode::unit_induced:
      return std::sqrt(std::abs(inner(g, x, v_proj, v_proj)));
    case ReducedMode::time_component:
      return -inner(g, x, v_proj, unit(g.dim, 0));
  }
  return 0.0;
}

ScatteringRecord normalize(const MetricField& g, const ScatteringRecord& rec, ReducedMode mode) {
  const double functional = normalization_functional(g, rec.x, rec.v_proj, mode);
  if (!(functional > 0.0) || !std::isfinite(functional)) {
    throw Error(ErrorKind::normalization, "normalization functional must be positive");
  }
  const double a = 1.0 / functional;
  ScatteringRecord out = rec;
  out.v_proj = a * rec.v_proj;
  out.w_proj = a * rec.w_proj;
  out.v_full = a * rec.v_full;
  out.w_full = a * rec.w_full;
  out.travel = rec.travel / a;
  return out;
}

Vec lower_tangential(const MetricField& g, const BoundaryHypersurface& s, const Vec& x,
                     const Vec& v_tangent) {
  if (!s.chart) throw Error(ErrorKind::precondition, "surface has no chart");
  const Vec u = s.chart->coords(x);
  const Mat e = s.chart->tangents(u);
  return e.transpose() * (g.eval(x) * v_tangent);
}

}  // namespace scatlab
