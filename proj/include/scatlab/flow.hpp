#ifndef SCATLAB_FLOW_HPP
#define SCATLAB_FLOW_HPP

#include "scatlab/geometry.hpp"

namespace scatlab {

// State layout: [position (dim), fiber (dim), aux (0 or 1)]. The fiber slot
// holds a velocity for second-order flows and a covector for Hamiltonian
// flows.
inline constexpr int kMaxState = 2 * kMaxDim + 1;
using State = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxState, 1>;

struct FlowSystem {
  int dim = 0;
  int aux = 0;
  std::function<State(const State&)> rhs;
  std::function<bool(const Vec&)> domain;
};

State make_state(const Vec& x, const Vec& fiber, std::optional<double> aux = std::nullopt);

State rk4_step(const FlowSystem& sys, const State& s, double h);

// Same stepping and stopping semantics as integrate_geodesic. The returned
// path's speed_squared is left at zero; callers fill it in.
GeodesicPath integrate_flow(const FlowSystem& sys, const State& s0, const StopCondition& stop,
                            const IntegrationOptions& opts = {});

FlowSystem geodesic_system(const MetricField& g);

}  // namespace scatlab

#endif  // SCATLAB_FLOW_HPP
