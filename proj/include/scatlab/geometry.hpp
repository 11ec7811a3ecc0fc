#ifndef SCATLAB_GEOMETRY_HPP
#define SCATLAB_GEOMETRY_HPP

#include "scatlab/fields.hpp"

#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace scatlab {

// ---------------------------------------------------------------------------
// Metric algebra

double inner(const MetricField& g, const Vec& x, const Vec& u, const Vec& w);

// Throws Error{chart | singular_metric | signature} when g fails its
// invariants at x: symmetric, |det g| >= 1e-12 * scale, and an eigenvalue sign
// count matching the declared signature.
void validate_metric(const MetricField& g, const Vec& x);

// Analytic derivative when supplied, else central differences with step
// 1e-5 * max(1, |x|).
MetricDerivative metric_derivative(const MetricField& g, const Vec& x);

Christoffel christoffel(const MetricField& g, const Vec& x);

// x'' = -Gamma(x)[v, v].
Vec geodesic_acceleration(const MetricField& g, const Vec& x, const Vec& v);

enum class Causal { timelike, lightlike, spacelike };
const char* to_string(Causal c);

struct CausalClass {
  Causal tag = Causal::spacelike;
  double quadratic_form_value = 0.0;
  double tolerance = 0.0;  // absolute band actually used
};

inline constexpr double kDefaultCausalTol = 1e-9;

// The band is tol * |v|^2 (Euclidean norm of the components).
CausalClass causal_classify(const MetricField& g, const Vec& x, const Vec& v,
                            double tol = kDefaultCausalTol);

// ---------------------------------------------------------------------------
// Paths and hypersurfaces

struct PathSample {
  double sigma = 0.0;
  Vec x;
  Vec v;
  double aux = 0.0;  // running line integral carried by some flows
};

struct GeodesicPath {
  std::vector<PathSample> samples;
  double speed_squared = 0.0;

  const PathSample& front() const { return samples.front(); }
  const PathSample& back() const { return samples.back(); }
  double length() const { return samples.back().sigma - samples.front().sigma; }
};

enum class SurfaceType { timelike, spacelike };

// Parametrization of a hypersurface by dim-1 surface coordinates u.
struct SurfaceChart {
  std::function<Vec(const Vec&)> point;     // u -> x
  std::function<Mat(const Vec&)> tangents;  // u -> dim x (dim-1), columns dx/du^a
  std::function<Vec(const Vec&)> coords;    // x on surface -> u
};

struct BoundaryHypersurface {
  int dim = 0;
  std::function<double(const Vec&)> defining;  // surface = {b = 0}
  std::function<Vec(const Vec&)> gradient;    // db as components
  SurfaceType causal_type = SurfaceType::timelike;
  int exterior_sign = 1;                       // exterior is {exterior_sign * b > 0}
  std::optional<SurfaceChart> chart;

  double signed_exterior(const Vec& x) const { return exterior_sign * defining(x); }
};

struct IntegrationOptions {
  double step = 1e-3;
  long max_steps = 5'000'000;
  double sigma_budget = 100.0;  // for surface stops
  double surface_tol = 1e-10;
};

struct StopAtSigma {
  double sigma_max = 1.0;
};
struct StopAtSurface {
  const BoundaryHypersurface* surface = nullptr;
};
using StopCondition = std::variant<StopAtSigma, StopAtSurface>;

// Chart exit during integration; carries the samples computed so far.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, GeodesicPath partial)
      : Error(ErrorKind::truncation, what), partial_(std::move(partial)) {}
  const GeodesicPath& partial() const { return partial_; }

 private:
  GeodesicPath partial_;
};

// Fixed-step RK4 for x'' + Gamma[x', x'] = 0. With StopAtSigma the step is
// shrunk so that an integer number of equal steps ends exactly at sigma_max.
// With StopAtSurface the first crossing from the interior to the exterior of
// the surface (sigma > 0) is bracketed on the samples and refined by
// bisection followed by three Newton steps; the final sample lies on the
// surface to `surface_tol`.
GeodesicPath integrate_geodesic(const MetricField& g, const Vec& x0, const Vec& v0,
                                const StopCondition& stop, const IntegrationOptions& opts = {});

// ---------------------------------------------------------------------------
// Boundary geometry

// Unit g-normal of S at x, pointing to the exterior. (nu, nu)_g is +1 for a
// timelike surface and -1 for a spacelike one.
Vec boundary_normal(const BoundaryHypersurface& s, const MetricField& g, const Vec& x);

// v' = v - eps (v, nu)_g nu with eps = (nu, nu)_g.
Vec boundary_project(const MetricField& g, const BoundaryHypersurface& s, const Vec& x,
                     const Vec& v);

// Lightlike v = v' + a nu with a = orientation * sqrt(-eps (v', v')_g).
// orientation = -1 points into the interior.
Vec lightlike_completion(const MetricField& g, const BoundaryHypersurface& s, const Vec& x,
                         const Vec& v_proj, int orientation);

// Throws Error{tangency} when |(v, nu)_g| < 1e-8 |v|.
void check_transversal(const MetricField& g, const BoundaryHypersurface& s, const Vec& x,
                       const Vec& v, double rel_tol = 1e-8);

// Induced metric g'_ab = (e_a, e_b)_g on the surface chart at u.
Mat induced_metric(const MetricField& g, const SurfaceChart& chart, const Vec& u);

}  // namespace scatlab

#endif  // SCATLAB_GEOMETRY_HPP
