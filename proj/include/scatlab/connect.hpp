#ifndef SCATLAB_CONNECT_HPP
#define SCATLAB_CONNECT_HPP

#include "scatlab/geometry.hpp"

#include <optional>

namespace scatlab {

// ---------------------------------------------------------------------------
// Newton shooting shared by Lorentzian and magnetic connectors

struct ShootingOptions {
  double tol = 1e-10;        // convergence on |endpoint - target|
  int max_iter = 50;
  double max_condition = 1e10;
  double jacobian_step = 1e-7;  // relative forward-difference step
  int polish_iter = 3;          // extra iterations after tol while still improving
};

struct ShootingResult {
  Vec velocity;
  Vec endpoint;
  int iterations = 0;
  double residual = 0.0;
  double condition = 0.0;
};

using EndpointMap = std::function<Vec(const Vec&)>;

// Solves endpoint(v) = target by Newton with a forward-difference Jacobian.
// Error{conjugate_point} when cond(J) > max_condition, Error{no_convergence}
// after max_iter iterations.
ShootingResult shoot(const EndpointMap& endpoint, const Vec& seed, const Vec& target,
                     const ShootingOptions& opts = {});

// ---------------------------------------------------------------------------
// Connecting geodesics and the energy defining function

struct ConnectOptions {
  IntegrationOptions integration;
  ShootingOptions shooting;
  double causal_tol = kDefaultCausalTol;
};

struct ConnectingGeodesic {
  GeodesicPath path;  // sigma in [0, 1]
  Vec x;
  Vec y;
  double energy = 0.0;  // 1/2 (gamma', gamma')_g
  CausalClass causal;
  int iterations = 0;
};

// Default seed is the coordinate chord y - x.
ConnectingGeodesic connecting_geodesic(const MetricField& g, const Vec& x, const Vec& y,
                                       const std::optional<Vec>& seed = std::nullopt,
                                       const ConnectOptions& opts = {});

// r(x, y) = E(gamma_[x,y]): negative iff the connector is timelike.
double defining_r(const MetricField& g, const Vec& x, const Vec& y,
                  const std::optional<Vec>& seed = std::nullopt, const ConnectOptions& opts = {});

bool sigma_detect(const MetricField& g, const Vec& x, const Vec& y, double tol = 1e-8,
                  const ConnectOptions& opts = {});

struct SigmaPair {
  Vec x;
  Vec y;
  ConnectingGeodesic connector;
  int iterations = 0;
};

// Moves the coordinate `time_index` of y inside [lo, hi] until r(x, y) = 0.
// Newton on dr/dy^0 = (e_0, gamma'(1))_g (first variation) safeguarded by the
// bracket; r must change sign on [lo, hi].
SigmaPair solve_sigma_pair(const MetricField& g, const Vec& x, const Vec& y, double lo, double hi,
                           const std::optional<Vec>& seed = std::nullopt,
                           const ConnectOptions& opts = {}, int time_index = 0);

// ---------------------------------------------------------------------------
// Graph identity d'r <-> S#

struct MichelResidual {
  double position = 0.0;   // |arrival - y|
  double covector = 0.0;   // |scale * xi_shot - d'_y r| after scale matching
  double scale = 0.0;      // positive matching factor (1 for the energy r)
  Vec grad_x;              // d'_x r in surface coordinates
  Vec grad_y;              // d'_y r in surface coordinates
  Vec v_proj;              // -grad'_x r as an ambient vector
  Vec shot_covector;       // lowered exit projection of the shot
};

struct MichelOptions {
  ConnectOptions connect;
  double fd_step = 1e-5;
  double sigma_tol = 1e-8;
};

// Requires both surfaces to carry charts whose first coordinate is the time
// direction used for scale matching.
MichelResidual michel_check(const MetricField& g, const BoundaryHypersurface& entry,
                            const BoundaryHypersurface& exit, const Vec& x, const Vec& y,
                            const MichelOptions& opts = {},
                            const std::optional<Vec>& seed = std::nullopt);

// ---------------------------------------------------------------------------
// Linearization against the light ray transform

struct MetricFamily {
  std::function<MetricField(double)> eval;
  std::optional<SymTwoTensorField> derivative_at_0;  // central FD in tau when absent
};

SymTwoTensorField family_derivative(const MetricFamily& family, double tau_step = 1e-5);

struct LinearizationReport {
  double fd_value = 0.0;
  double lrt_value = 0.0;
  double kappa = 0.5;
  double rel_error = 0.0;
};

inline constexpr double kLinearizationFloor = 1e-12;

LinearizationReport linearize_r(const MetricFamily& family, const Vec& x, const Vec& y,
                                double fd_step, const ConnectOptions& opts = {},
                                const std::optional<Vec>& seed = std::nullopt);

}  // namespace scatlab

#endif  // SCATLAB_CONNECT_HPP
