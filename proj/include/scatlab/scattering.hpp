#ifndef SCATLAB_SCATTERING_HPP
#define SCATLAB_SCATTERING_HPP

#include "scatlab/geometry.hpp"

namespace scatlab {

// One sample of the scattering relation S(x, v') = (y, w'), with the affine
// length of the ray in the parametrization of the entry vector.
struct ScatteringRecord {
  Vec x;
  Vec v_proj;
  Vec y;
  Vec w_proj;
  double travel = 0.0;
  // Full (unprojected) entry and exit velocities, kept for diagnostics.
  Vec v_full;
  Vec w_full;
};

enum class ReducedMode {
  unit_induced,    // (v', v')_{g'} = -1 on timelike U, +1 on spacelike U
  time_component,  // -(v', e_0)_g = 1
};

// Integrates the inward lightlike lift of v' until the first transversal
// crossing of V (U == V allowed, the first return is taken).
ScatteringRecord scatter(const MetricField& g, const BoundaryHypersurface& entry,
                         const BoundaryHypersurface& exit, const Vec& x, const Vec& v_proj,
                         const IntegrationOptions& opts = {});

// Same, also returning the traced path. The path is re-integrated with equal
// steps that divide the travel exactly, so it can feed Simpson quadrature.
std::pair<ScatteringRecord, GeodesicPath> trace_ray(const MetricField& g,
                                                    const BoundaryHypersurface& entry,
                                                    const BoundaryHypersurface& exit,
                                                    const Vec& x, const Vec& v_proj,
                                                    const IntegrationOptions& opts = {});

// Value of the normalization functional for a mode at the entry point.
double normalization_functional(const MetricField& g, const Vec& x, const Vec& v_proj,
                                ReducedMode mode);

// Rescales (v', w') by a > 0 so that the mode constraint holds at the entry;
// travel is divided by a (affine reparametrization).
ScatteringRecord normalize(const MetricField& g, const ScatteringRecord& rec, ReducedMode mode);

// Cotangent version S#: index-lowering with the induced metric in the
// surface chart of `s` (components along the chart's tangent basis).
Vec lower_tangential(const MetricField& g, const BoundaryHypersurface& s, const Vec& x,
                     const Vec& v_tangent);

}  // namespace scatlab

#endif  // SCATLAB_SCATTERING_HPP
