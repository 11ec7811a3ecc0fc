#ifndef SCATLAB_EXPERIMENTS_HPP
#define SCATLAB_EXPERIMENTS_HPP

#include "scatlab/scenarios.hpp"

#include <json.hpp>

#include <cstdint>
#include <exception>
#include <functional>
#include <string>
#include <vector>

namespace scatlab {

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr std::uint64_t kDefaultSeed = 20240917;

// Malformed or ill-typed configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A library failure inside one record (exit code 4).
class RecordFailure : public std::runtime_error {
 public:
  RecordFailure(std::size_t index, const std::string& what)
      : std::runtime_error("record " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

struct RunConfig {
  std::optional<ScenarioDescriptor> scenario;
  ConnectOptions connect;
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
  nlohmann::json experiment = nlohmann::json::object();
};

// Parses the JSON tree; unknown top-level keys and wrong types are ConfigError,
// bad scenario contents are ScenarioError.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

struct Record {
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json outputs = nlohmann::json::object();
  nlohmann::json residuals = nlohmann::json::object();
  double residual = 0.0;  // the quantity compared with the report tolerance
};

// A named secondary bound checked by an experiment (le: value <= bound,
// otherwise value >= bound).
struct Check {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool le = true;
  bool pass() const { return le ? value <= bound : value >= bound; }
};

struct ExperimentReport {
  std::string experiment;
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<Record> records;
  std::vector<Check> checks;
  double tolerance = 0.0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  bool pass = false;
  double wall_time_s = 0.0;
  nlohmann::json notes = nlohmann::json::object();

  // Fills max/mean and pass = (max_residual <= tolerance) and every check.
  void finalize();
};

nlohmann::json to_json(const ExperimentReport& r);
std::string to_csv(const ExperimentReport& r);

nlohmann::json vec_json(const Vec& v);

// ---------------------------------------------------------------------------
// Perturbation families and test fields shared by experiments and tests

// g + (exp(tau q) - 1) H with H = diag(0, h) and q a Gaussian off the axis.
// Nonlinear in tau, not a gauge direction.
MetricFamily bump_scale_family(const Scenario& s);
// g + tau H (for product_disk: -dt^2 + (1 + tau) |dx|^2).
MetricFamily spatial_scale_family(const Scenario& s);
// (1 + tau c) g with c a spatial Gaussian.
MetricFamily conformal_family(const Scenario& s);
// g + tau d^s v with v a spacetime bump times a constant covector, supported
// away from the boundary surfaces.
MetricFamily potential_family(const Scenario& s);

// Bump covector supported strictly inside the scenario's spacetime region
// crossed by the rays, with an analytic Jacobian.
CovectorField interior_potential(const Scenario& s);

// Affine covector a + B x with J(k, j) = B(j, k).
CovectorField affine_covector(const Vec& a, const Mat& b);

// Names accepted by run_experiment (everything except `all`).
const std::vector<std::string>& experiment_names();

// Throws ScenarioError when the command does not fit the scenario and
// RecordFailure when a record fails numerically.
ExperimentReport run_experiment(const std::string& command, const RunConfig& cfg);

// Ordered map over [0, n) on a small worker pool; the output order never
// depends on the thread count. The first failing index is rethrown as a
// RecordFailure.
template <class F>
auto parallel_map(std::size_t n, int threads, F&& fn) -> std::vector<decltype(fn(std::size_t{}))>;

}  // namespace scatlab

#include "scatlab/detail/parallel.hpp"

#endif  // SCATLAB_EXPERIMENTS_HPP
