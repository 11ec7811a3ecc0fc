#ifndef SCATLAB_GAUGE_HPP
#define SCATLAB_GAUGE_HPP

#include "scatlab/scattering.hpp"
#include "scatlab/stationary.hpp"

#include <vector>

namespace scatlab {

// Closed-form diffeomorphism of the base chart. jacobian(x)(i, a) = d psi^i / d x^a.
struct Diffeomorphism {
  int dim = 0;
  std::function<Vec(const Vec&)> map;
  std::function<Vec(const Vec&)> inverse;
  std::function<Mat(const Vec&)> jacobian;
};

// (psi, phi): acts by h -> psi^* h, omega -> psi^*(omega + d phi),
// lambda -> lambda o psi. Both must fix the boundary.
struct GaugePair {
  Diffeomorphism psi;
  ScalarField phi;
};

Diffeomorphism identity_map(int dim);
GaugePair identity_gauge(int dim);

// Applying p1 and then p2 equals applying compose_gauge(p1, p2):
// psi = psi1 o psi2, phi = phi1 + phi2 o psi1^{-1}.
GaugePair compose_gauge(const GaugePair& p1, const GaugePair& p2);
// (psi^{-1}, -phi o psi).
GaugePair inverse_gauge(const GaugePair& p);

// Max of |psi(x) - x| and |phi(x)| over the given boundary samples.
double boundary_defect(const GaugePair& p, const std::vector<Vec>& boundary_points);

// Throws Error{singular_metric} when the Jacobian of psi is singular at an
// evaluated point.
StationaryMetric apply_gauge(const GaugePair& p, const StationaryMetric& m);

// ---------------------------------------------------------------------------
// Hamiltonian flows

struct HamiltonianState {
  double sigma = 0.0;
  Vec x;
  Vec xi;
};

// H = 1/2 c^{-1} g^{ij} xi_i xi_j (c = 1 when absent).
double hamiltonian(const MetricField& g, const Vec& x, const Vec& xi,
                   const std::optional<ScalarField>& c = std::nullopt);

FlowSystem hamiltonian_system(const MetricField& g, const std::optional<ScalarField>& c);

// RK4 on the Hamiltonian system up to sigma_max. With c supplied the initial
// state must satisfy |H| <= 1e-10 max(1, |xi|^2), else Error{precondition}.
std::vector<HamiltonianState> hamiltonian_flow(const MetricField& g, const Vec& x0, const Vec& xi0,
                                               const std::optional<ScalarField>& c,
                                               double sigma_max,
                                               const IntegrationOptions& opts = {});

struct ReparamReport {
  double deviation = 0.0;     // max |(x~, xi~)(s) - (x, xi)(alpha(s))|
  double alpha_end = 0.0;     // alpha(sigma_max)
  bool monotone = true;       // alpha strictly increasing on the samples
  double h_drift = 0.0;       // max |H| drift along the scaled flow
};

// Integrates the scaled flow and the unscaled flow independently, solves
// alpha' = 1 / c(x(alpha)) along the unscaled one (cubic Hermite between
// samples) and compares.
ReparamReport conformal_reparam_check(const MetricField& g, const ScalarField& c, const Vec& x0,
                                      const Vec& xi0, double sigma_max,
                                      const IntegrationOptions& opts = {});

// ---------------------------------------------------------------------------
// Scattering invariance

struct EntryRay {
  Vec x;
  Vec v_proj;
};

struct InvarianceReport {
  double max_deviation = 0.0;
  std::vector<double> deviations;
};

// Scatters every entry under both metrics and compares exits as a homogeneous
// relation: dev = |y1 - y2| + |w1 - a w2| with a = <w1, w2> / |w2|^2.
InvarianceReport invariance_check(const MetricField& g1, const MetricField& g2,
                                  const BoundaryHypersurface& entry,
                                  const BoundaryHypersurface& exit,
                                  const std::vector<EntryRay>& rays,
                                  const IntegrationOptions& opts = {});

}  // namespace scatlab

#endif  // SCATLAB_GAUGE_HPP
