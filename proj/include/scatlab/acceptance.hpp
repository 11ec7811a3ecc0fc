#ifndef SCATLAB_ACCEPTANCE_HPP
#define SCATLAB_ACCEPTANCE_HPP

#include "scatlab/experiments.hpp"

#include <functional>
#include <string>
#include <vector>

namespace scatlab {

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> parts;
  std::string error;  // set when a run threw
  double seconds = 0.0;

  bool pass() const;
  // The part with the largest value / bound ratio.
  const Check* worst() const;
};

struct AcceptanceOptions {
  int threads = 1;
  std::uint64_t seed = kDefaultSeed;
  ConnectOptions connect;
};

// Observed convergence order from successive halvings: orders[i] compares
// errors[i] and errors[i + 1]; observed is the finest pair.
struct OrderReport {
  std::vector<double> steps;
  std::vector<double> errors;
  std::vector<double> orders;
  double observed = 0.0;
};

// RK4 endpoint error against a fine reference on the perturbed product at
// amplitude 0.5, for steps 0.08 / 0.04 / 0.02.
OrderReport rk4_endpoint_order(const IntegrationOptions& base = {});

// Central FD in tau of the connector energy for the nonlinear bump family,
// against half the light ray transform, for tau steps 0.4 / 0.2 / 0.1.
// Uses the worst (smallest) order over a few Sigma-pairs.
OrderReport fd_linearization_order(const ConnectOptions& opts = {});

// Runs the 13 criteria in order; on_result fires after each.
std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& opts,
    const std::function<void(const CriterionResult&)>& on_result = {});

// "PASS [ 3] title  (worst: name = v <= b, 1.2 s)"
std::string format_line(const CriterionResult& r);

nlohmann::json to_json(const CriterionResult& r);

}  // namespace scatlab

#endif  // SCATLAB_ACCEPTANCE_HPP
