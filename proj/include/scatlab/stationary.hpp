#ifndef SCATLAB_STATIONARY_HPP
#define SCATLAB_STATIONARY_HPP

#include "scatlab/connect.hpp"
#include "scatlab/flow.hpp"
#include "scatlab/scattering.hpp"

namespace scatlab {

// lambda (-(dt + omega)^2 + h) on R x N. Fields live on the base chart N
// (dimension n); the assembled metric lives on (t, x) with dimension n + 1.
struct StationaryMetric {
  ScalarField lambda;
  CovectorField omega;
  MetricField base;
  MetricField assembled;
};

// Builds the assembled metric together with its coordinate derivatives from
// the derivatives of lambda, omega and h (each falling back to FD when the
// field has no analytic derivative).
StationaryMetric make_stationary(ScalarField lambda, CovectorField omega, MetricField base);

// From the raw form -lambda dt^2 + 2 omega_raw dt dx + h_raw by completing the
// square. Throws Error{not_positive_definite} when the resulting h is not.
StationaryMetric from_raw(const ScalarField& lambda, const CovectorField& omega_raw,
                          const MetricField& h_raw);

// Raw block matrix -lambda dt^2 + 2 omega_raw dt dx + h_raw at a base point.
Mat raw_matrix(const ScalarField& lambda, const CovectorField& omega_raw,
               const MetricField& h_raw, const Vec& x);

// Same omega and h with lambda = 1.
StationaryMetric conformal_normalize(const StationaryMetric& m);

// Multiplies lambda by a positive factor (conformal change of the spacetime).
StationaryMetric conformal_scale(const StationaryMetric& m, const ScalarField& mu);

// Time-like invariant of a spacetime vector: v_t + <omega, v_x>.
double time_invariant(const StationaryMetric& m, const Vec& x, const Vec& v);

// ---------------------------------------------------------------------------
// Magnetic system on the base

struct MagneticSystem {
  MetricField base;
  CovectorField omega;

  // Omega_ij = d_i omega_j - d_j omega_i.
  Mat two_form(const Vec& x) const;
  // Y u with <Y u, v>_h = d omega(u, v) for every v.
  Vec lorentz_force(const Vec& x, const Vec& u) const;
};

MagneticSystem magnetic_system(const StationaryMetric& m);

// D_sigma x' = k Y x'. When `homogeneous` is set the force is scaled by the
// current speed |x'|_h instead of the constant k, which keeps the flow
// positively homogeneous (used by the two-point shooting on [0, 1]). The aux
// slot accumulates the line integral of omega.
FlowSystem magnetic_flow(const MagneticSystem& mag, double k = 1.0, bool homogeneous = false);

// Unit-speed magnetic geodesic; Error{precondition} if |u0|_h differs from 1
// by more than 1e-10.
GeodesicPath magnetic_integrate(const MagneticSystem& mag, const Vec& x0, const Vec& u0,
                                const StopCondition& stop, const IntegrationOptions& opts = {});

struct MagneticRecord {
  Vec x;
  Vec u_proj;
  Vec y;
  Vec w_proj;
  double length = 0.0;
  double flux = 0.0;    // integral of omega along the path
  double action = 0.0;  // length - flux
  GeodesicPath path;
};

// Inward unit completion of u' on the base boundary, traced to the exit.
// The base boundary is a Riemannian hypersurface (normal of positive norm),
// declared with SurfaceType::timelike.
MagneticRecord magnetic_scatter(const MagneticSystem& mag, const BoundaryHypersurface& boundary,
                                const Vec& x, const Vec& u_proj,
                                const IntegrationOptions& opts = {});

struct MagneticConnector {
  Vec velocity;  // initial velocity on [0, 1]; |velocity|_h = length
  double length = 0.0;
  double flux = 0.0;
  double action = 0.0;
  GeodesicPath path;  // homogeneous parametrization on [0, 1]
  int iterations = 0;
};

MagneticConnector magnetic_connector(const MagneticSystem& mag, const Vec& x, const Vec& y,
                                     const std::optional<Vec>& seed = std::nullopt,
                                     const ConnectOptions& opts = {});

// Boundary action: length minus the flux of omega along the connector.
double action_A(const MagneticSystem& mag, const Vec& x, const Vec& y,
                const std::optional<Vec>& seed = std::nullopt, const ConnectOptions& opts = {});

// ---------------------------------------------------------------------------
// Lorentzian <-> magnetic correspondence (lambda = 1)

struct ProjectionResiduals {
  double k = 0.0;          // k at the start
  double k_drift = 0.0;    // max |k(sigma) - k(0)|
  double ode_residual = 0.0;  // max |D x' - k Y x'|_h from sample differences
  double speed = 0.0;      // m = |x'|_h at the start
};

ProjectionResiduals project_and_verify(const StationaryMetric& m, const GeodesicPath& path);

// t(sigma) = t0 + sigma - int_0^sigma <omega, x'>, the lightlike lift of a
// unit-speed magnetic path (uses the aux flux carried by the path).
GeodesicPath lift_magnetic(const StationaryMetric& m, const GeodesicPath& base_path, double t0);

// Spacetime boundary R x dN from the base boundary.
BoundaryHypersurface cylinder_over(const BoundaryHypersurface& base_boundary);

struct ThmMagResiduals {
  double exit = 0.0;          // spacetime exit projection vs magnetic exit
  double length = 0.0;        // |l_mag - (s - t + flux)|
  double action = 0.0;        // |A(x, y) - (s - t)| with A from the connector
  double exit_time_component = 0.0;  // |w'_t - 1|
  double round_trip = 0.0;    // S rebuilt from (S_mag, A) vs S
  ScatteringRecord lorentzian;
  MagneticRecord magnetic;
  double connector_action = 0.0;
};

// x on R x dN, v' tangent with v'_t + <omega, v'_x> = 1.
ThmMagResiduals thmmag_verify(const StationaryMetric& m, const BoundaryHypersurface& base_boundary,
                              const Vec& x, const Vec& v_proj, const ConnectOptions& opts = {});

struct MagneticMichelResidual {
  double entry = 0.0;  // |u'^flat - (-d'_x A + omega'(x))|
  double exit = 0.0;   // |w'^flat - (d'_y A + omega'(y))|
};

MagneticMichelResidual magnetic_michel(const MagneticSystem& mag,
                                       const BoundaryHypersurface& boundary, const Vec& x,
                                       const Vec& y, double fd_step = 1e-5,
                                       const ConnectOptions& opts = {});

// Perturbation of g = -(dt + omega)^2 + h in the direction (delta_h, delta_omega).
SymTwoTensorField stationary_variation(const StationaryMetric& m, const SymTwoTensorField& delta_h,
                                       const CovectorField& delta_omega);

struct EquivalenceReport {
  double lorentzian_value = 0.0;  // L(f) on the [0, 1] lightlike connector
  double magnetic_value = 0.0;    // I[delta_h / 2, -delta_omega] on the unit-speed base path
  double length = 0.0;            // l_{x,y}
  double ratio = 0.0;             // lorentzian_value / magnetic_value (when defined)
  double pointwise = 0.0;         // max relative mismatch of integrands vs 2 l^2 factor
  double integrated = 0.0;        // |L(f) - 2 l I| / max(|2 l I|, floor)
  double integrated_l2 = 0.0;     // |L(f) - 2 l^2 I| / max(|2 l^2 I|, floor)
};

EquivalenceReport linearization_equivalence(const StationaryMetric& m,
                                            const SymTwoTensorField& delta_h,
                                            const CovectorField& delta_omega, const Vec& x,
                                            const Vec& y, double t0 = 0.0,
                                            const ConnectOptions& opts = {});

// Potential phi with d_n phi = omega_n and phi = 0 at x^n = 0, in coordinates
// whose last entry is the distance to the boundary. The transformed form is
// omega - d phi with d phi by central differences.
struct NormalGauge {
  ScalarField phi;
  CovectorField transformed;
};

NormalGauge boundary_normal_coords(const CovectorField& omega, int normal_index);

}  // namespace scatlab

#endif  // SCATLAB_STATIONARY_HPP
