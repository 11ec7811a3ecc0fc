#ifndef SCATLAB_SCENARIOS_HPP
#define SCATLAB_SCENARIOS_HPP

#include "scatlab/gauge.hpp"
#include "scatlab/stationary.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace scatlab {

enum class ScenarioKind { minkowski_slab, product_disk, perturbed_product, stationary_rot, custom };

const char* to_string(ScenarioKind kind);
std::optional<ScenarioKind> parse_kind(const std::string& name);

struct GridSpec {
  int rays = 50;
  int pairs = 20;
  int sweep_lines = 20;
  int sweep_points = 20;
};

// Unknown kinds, out-of-range parameters and empty grids are scenario errors.
struct ScenarioDescriptor {
  std::string name;
  ScenarioKind kind = ScenarioKind::product_disk;
  std::map<std::string, double> parameters;
  GridSpec grids;
  std::map<std::string, double> tolerances;
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// All bundled geometries are stationary in the coordinates (t, x^1, x^2).
// Disk scenarios use the lateral cylinder over |x| = R for both entry and
// exit; the slab uses {x^1 = 0} and {x^1 = 1}.
struct Scenario {
  ScenarioDescriptor desc;
  StationaryMetric metric;
  BoundaryHypersurface entry;
  BoundaryHypersurface exit;
  std::optional<BoundaryHypersurface> base_boundary;  // disk scenarios
  double radius = 1.0;

  const MetricField& g() const { return metric.assembled; }
  bool is_disk() const { return desc.kind != ScenarioKind::minkowski_slab; }
  double param(const std::string& key) const { return desc.parameters.at(key); }
};

// Documented defaults: radius 1, B 0.2 (stationary_rot, custom), amplitude 0.1
// (perturbed_product, custom), lambda_amplitude 0.5 (custom).
ScenarioDescriptor default_descriptor(ScenarioKind kind);
void validate_descriptor(const ScenarioDescriptor& d);
Scenario build_scenario(const ScenarioDescriptor& d);
Scenario make_scenario(ScenarioKind kind);

// Boundary pieces exposed for tests and experiments.
BoundaryHypersurface disk_boundary(double radius);
BoundaryHypersurface slab_plane(double position, int exterior_sign);

// Deterministic ray grid. On disks: entry angle theta_i, tangential part
// beta_i e_theta (|beta| <= 0.7, e_theta h-unit), time invariant 1. On the
// slab: entry (0, 0, z_i) with v' = (1, 0, beta_i).
std::vector<EntryRay> ray_grid(const Scenario& s, int count);

// Boundary point pairs (x, y) before any Sigma solve: x at time 0, y with the
// coordinate time of the flat light cone. Disk pairs are roughly opposite.
std::vector<std::pair<Vec, Vec>> pair_grid(const Scenario& s, int count);

// Pairs moved onto the lightlike set by solving for the time of y.
std::vector<SigmaPair> sigma_pairs(const Scenario& s, int count, const ConnectOptions& opts = {});

// Smooth bump supported in |x| < r0: exp(1 - 1 / (1 - |x|^2 / r0^2)).
ScalarField bump(double r0, double amplitude = 1.0, Vec center = Vec());

// Rotation of the base by angle eps * bump(|x|); identity near the boundary.
Diffeomorphism twist_map(double eps, double r0);

}  // namespace scatlab

#endif  // SCATLAB_SCENARIOS_HPP
