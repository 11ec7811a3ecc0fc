#include "scatlab/lightray.hpp"

#include <cmath>

namespace scatlab {

double simpson(const std::vector<double>& values, double h) {
  const std::size_t intervals = values.size() - 1;
  if (values.size() < 3) throw Error(ErrorKind::precondition, "Simpson needs two intervals");
  std::size_t simpson_end = intervals;
  double tail = 0.0;
  if (intervals % 2 == 1) {
    if (intervals < 3) throw Error(ErrorKind::precondition, "Simpson needs an even count or >= 3");
    simpson_end = intervals - 3;
    const std::size_t k = simpson_end;
    tail = 3.0 * h / 8.0 *
           (values[k] + 3.0 * values[k + 1] + 3.0 * values[k + 2] + values[k + 3]);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
    sum += values[i] + 4.0 * values[i + 1] + values[i + 2];
  }
  return sum * h / 3.0 + tail;
}

double path_integral(const GeodesicPath& path,
                     const std::function<double(const PathSample&)>& integrand) {
  const auto& s = path.samples;
  if (s.size() < 3) throw Error(ErrorKind::precondition, "path too short for quadrature");
  const double h = (s.back().sigma - s.front().sigma) / static_cast<double>(s.size() - 1);
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (std::abs((s[i].sigma - s[i - 1].sigma) - h) > 1e-9 * std::max(1.0, h)) {
      throw Error(ErrorKind::precondition, "quadrature needs a uniformly sampled path");
    }
  }
  std::vector<double> values;
  values.reserve(s.size());
  for (const auto& sample : s) values.push_back(integrand(sample));
  return simpson(values, h);
}

double ray_transform(const SymTwoTensorField& f, const GeodesicPath& path) {
  return path_integral(path, [&f](const PathSample& p) { return p.v.dot(f(p.x) * p.v); });
}

double light_ray_transform(const SymTwoTensorField& f, const GeodesicPath& path,
                           double lightlike_tol) {
  const double scale = std::max(1.0, path.front().v.squaredNorm());
  if (std::abs(path.speed_squared) > lightlike_tol * scale) {
    throw Error(ErrorKind::precondition, "light ray transform needs a lightlike path");
  }
  return ray_transform(f, path);
}

SymTwoTensorField sym_diff(const CovectorField& v, const MetricField& g) {
  const int n = g.dim;
  return {n, [v, g, n](const Vec& x) {
            const Mat jac = jacobian_of(v, x);  // (k, j) = d_k v_j
            const Vec vx = v(x);
            const Christoffel gamma = christoffel(g, x);
            Mat out = 0.5 * (jac + jac.transpose());
            for (int k = 0; k < n; ++k) out -= vx(k) * gamma.symbols[k];
            return out;
          }};
}

double endpoint_pairing_difference(const CovectorField& v, const GeodesicPath& path) {
  const auto& a = path.front();
  const auto& b = path.back();
  return v(b.x).dot(b.v) - v(a.x).dot(a.v);
}

double kernel_potential_test(const CovectorField& v, const MetricField& g,
                             const std::vector<GeodesicPath>& rays, double endpoint_tol) {
  const SymTwoTensorField dsv = sym_diff(v, g);
  double worst = 0.0;
  for (const auto& ray : rays) {
    if (v(ray.front().x).cwiseAbs().maxCoeff() > endpoint_tol ||
        v(ray.back().x).cwiseAbs().maxCoeff() > endpoint_tol) {
      throw Error(ErrorKind::precondition, "potential must vanish at the ray endpoints");
    }
    worst = std::max(worst, std::abs(light_ray_transform(dsv, ray)));
  }
  return worst;
}

double kernel_conformal_test(const ScalarField& c, const MetricField& g,
                             const std::vector<GeodesicPath>& rays) {
  const SymTwoTensorField cg{g.dim, [c, g](const Vec& x) { return Mat(c(x) * g.eval(x)); }};
  double worst = 0.0;
  for (const auto& ray : rays) worst = std::max(worst, std::abs(light_ray_transform(cg, ray)));
  return worst;
}

double magnetic_linearized_transform(const SymTwoTensorField& f, const CovectorField& beta,
                                     const MetricField& h, const GeodesicPath& path,
                                     double unit_tol) {
  for (const auto& p : path.samples) {
    if (std::abs(std::sqrt(inner(h, p.x, p.v, p.v)) - 1.0) > unit_tol) {
      throw Error(ErrorKind::precondition, "magnetic transform needs a unit-speed path");
    }
  }
  return path_integral(path, [&](const PathSample& p) {
    return p.v.dot(f(p.x) * p.v) + beta(p.x).dot(p.v);
  });
}

}  // namespace scatlab
