#include "scatlab/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace scatlab {

bool CriterionResult::pass() const {
  if (!error.empty() || parts.empty()) return false;
  for (const auto& c : parts) {
    if (!c.pass() || !std::isfinite(c.value)) return false;
  }
  return true;
}

const Check* CriterionResult::worst() const {
  // Count checks (>=) only win when they fail or nothing else exists.
  const Check* w = nullptr;
  double ratio = -1.0;
  for (const auto& c : parts) {
    if (!c.le && c.pass() && w) continue;
    double q = 0.0;
    if (!std::isfinite(c.value)) {
      q = INFINITY;
    } else if (c.le) {
      q = c.bound > 0.0 ? c.value / c.bound : (c.value > 0.0 ? INFINITY : 0.0);
    } else {
      q = c.value > 0.0 ? c.bound / c.value : INFINITY;
    }
    if (q > ratio) {
      ratio = q;
      w = &c;
    }
  }
  return w;
}

std::string format_line(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s [%2d] ", r.pass() ? "PASS" : "FAIL", r.id);
  std::ostringstream out;
  out << head << r.title << "  (";
  if (!r.error.empty()) {
    out << "error: " << r.error;
  } else if (const Check* w = r.worst()) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "worst: %s = %.3e %s %.1e", w->name.c_str(), w->value,
                  w->le ? "<=" : ">=", w->bound);
    out << buf;
  }
  char tail[32];
  std::snprintf(tail, sizeof tail, ", %.1f s)", r.seconds);
  out << tail;
  return out.str();
}

nlohmann::json to_json(const CriterionResult& r) {
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& c : r.parts) {
    parts.push_back({{"name", c.name},
                     {"value", c.value},
                     {"bound", c.bound},
                     {"relation", c.le ? "<=" : ">="},
                     {"pass", c.pass()}});
  }
  nlohmann::json j = {{"id", r.id}, {"title", r.title}, {"pass", r.pass()}, {"parts", parts}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

// ---------------------------------------------------------------------------

namespace {

double log2_ratio(double coarse, double fine) { return std::log2(coarse / fine); }

void fill_orders(OrderReport& rep) {
  for (std::size_t i = 0; i + 1 < rep.errors.size(); ++i) {
    rep.orders.push_back(log2_ratio(rep.errors[i], rep.errors[i + 1]));
  }
  rep.observed = rep.orders.empty() ? 0.0 : rep.orders.back();
}

}  // namespace

OrderReport rk4_endpoint_order(const IntegrationOptions& base) {
  ScenarioDescriptor d = default_descriptor(ScenarioKind::perturbed_product);
  d.parameters["amplitude"] = 0.5;
  const Scenario s = build_scenario(d);
  Vec x0(3), v0(3);
  x0 << 0.0, -0.5, 0.1;
  v0 << 1.2, 1.0, 0.3;
  const double span = 1.28;  // a multiple of every step below

  auto endpoint = [&](double step) {
    IntegrationOptions o = base;
    o.step = step;
    const GeodesicPath p = integrate_geodesic(s.g(), x0, v0, StopAtSigma{span}, o);
    State z(6);
    z << p.samples.back().x, p.samples.back().v;
    return z;
  };
  const State ref = endpoint(0.0025);
  OrderReport rep;
  for (double h : {0.08, 0.04, 0.02}) {
    rep.steps.push_back(h);
    rep.errors.push_back((endpoint(h) - ref).norm());
  }
  fill_orders(rep);
  return rep;
}

OrderReport fd_linearization_order(const ConnectOptions& opts) {
  const Scenario s = make_scenario(ScenarioKind::product_disk);
  const MetricFamily fam = bump_scale_family(s);
  const auto pairs = sigma_pairs(s, 3, opts);
  const std::vector<double> steps{0.4, 0.2, 0.1};
  OrderReport worst;
  worst.observed = INFINITY;
  for (const auto& sp : pairs) {
    OrderReport rep;
    for (double tau : steps) {
      const LinearizationReport lr =
          linearize_r(fam, sp.x, sp.y, tau, opts, sp.connector.path.front().v);
      rep.steps.push_back(tau);
      rep.errors.push_back(std::abs(lr.fd_value - lr.kappa * lr.lrt_value));
    }
    fill_orders(rep);
    if (rep.observed < worst.observed) worst = rep;
  }
  return worst;
}

// ---------------------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

RunConfig config_for(const AcceptanceOptions& o, ScenarioKind kind,
                     const std::function<void(ScenarioDescriptor&)>& tweak = {}) {
  RunConfig c;
  c.connect = o.connect;
  c.seed = o.seed;
  c.threads = o.threads;
  ScenarioDescriptor d = default_descriptor(kind);
  if (tweak) tweak(d);
  c.scenario = d;
  return c;
}

double check_value(const ExperimentReport& rep, const std::string& name) {
  for (const auto& c : rep.checks) {
    if (c.name == name) return c.value;
  }
  throw std::logic_error("report has no check " + name);
}

double residual_max(const ExperimentReport& rep, const std::string& key) {
  double m = 0.0;
  for (const auto& r : rep.records) {
    if (!r.residuals.contains(key)) throw std::logic_error("records lack residual " + key);
    m = std::max(m, r.residuals.at(key).get<double>());
  }
  return m;
}

std::string label(const ExperimentReport& rep, const std::string& what) {
  return rep.scenario + "/" + rep.experiment + ":" + what;
}

const ScenarioKind kAllKinds[] = {ScenarioKind::minkowski_slab, ScenarioKind::product_disk,
                                  ScenarioKind::perturbed_product, ScenarioKind::stationary_rot,
                                  ScenarioKind::custom};

void c1_conservation(const AcceptanceOptions& o, CriterionResult& r) {
  for (ScenarioKind k : kAllKinds) {
    const auto rep = run_experiment(
        "scatter", config_for(o, k, [](ScenarioDescriptor& d) { d.grids.rays = 20; }));
    r.parts.push_back({label(rep, "conservation"), check_value(rep, "conservation"), 1e-8});
  }
  for (ScenarioKind k : {ScenarioKind::stationary_rot, ScenarioKind::custom}) {
    const auto rep = run_experiment(
        "verify-thmmag", config_for(o, k, [](ScenarioDescriptor& d) { d.grids.rays = 20; }));
    r.parts.push_back({label(rep, "magnetic_speed"), check_value(rep, "magnetic_speed"), 1e-8});
    r.parts.push_back({label(rep, "non_null_speed"), check_value(rep, "non_null_speed"), 1e-8});
  }
  for (ScenarioKind k : {ScenarioKind::product_disk, ScenarioKind::perturbed_product}) {
    const auto rep = run_experiment("conformal-reparam", config_for(o, k));
    r.parts.push_back({label(rep, "h_drift"), check_value(rep, "h_drift"), 1e-9});
  }
}

void c2_trichotomy(const AcceptanceOptions& o, CriterionResult& r) {
  const auto rep = run_experiment("defining-r-sweep", config_for(o, ScenarioKind::product_disk));
  r.parts.push_back({label(rep, "relative_closed_form"), residual_max(rep, "relative_closed_form"), 1e-8});
  r.parts.push_back({label(rep, "trichotomy_violations"), residual_max(rep, "trichotomy"), 0.0});
  r.parts.push_back({label(rep, "lines_without_single_crossing"), residual_max(rep, "single_crossing"), 0.0});
  r.parts.push_back({label(rep, "root"), residual_max(rep, "root"), 1e-8});
  r.parts.push_back({label(rep, "lines"), static_cast<double>(rep.records.size()), 20.0, false});
}

void c3_michel(const AcceptanceOptions& o, CriterionResult& r) {
  for (ScenarioKind k : {ScenarioKind::product_disk, ScenarioKind::stationary_rot}) {
    const auto rep = run_experiment("michel", config_for(o, k));
    r.parts.push_back({label(rep, "residual"), rep.max_residual, 1e-5});
    r.parts.push_back({label(rep, "pairs"), static_cast<double>(rep.records.size()), 20.0, false});
  }
}

void c4_linearization(const AcceptanceOptions& o, CriterionResult& r) {
  struct Case {
    ScenarioKind kind;
    const char* family;
    double bound;
  };
  const Case cases[] = {{ScenarioKind::product_disk, "bump_scale", 1e-3},
                        {ScenarioKind::product_disk, "spatial_scale", 1e-3},
                        {ScenarioKind::stationary_rot, "bump_scale", 1e-3},
                        {ScenarioKind::product_disk, "conformal", 1e-6},
                        {ScenarioKind::product_disk, "potential", 1e-6}};
  for (const auto& c : cases) {
    RunConfig cfg = config_for(o, c.kind);
    cfg.experiment = {{"family", c.family}, {"fd_step", 1e-4}};
    const auto rep = run_experiment("verify-thm1", cfg);
    r.parts.push_back({label(rep, c.family), rep.max_residual, c.bound});
    r.parts.push_back({label(rep, std::string(c.family) + "_pairs"),
                       static_cast<double>(rep.records.size()), 20.0, false});
  }
}

void c5_kernel(const AcceptanceOptions& o, CriterionResult& r) {
  for (ScenarioKind k : {ScenarioKind::perturbed_product, ScenarioKind::stationary_rot}) {
    const auto rep = run_experiment("kernel-tests", config_for(o, k));
    r.parts.push_back({label(rep, "potential"), rep.max_residual, 1e-8});
    r.parts.push_back({label(rep, "conformal"), check_value(rep, "conformal"), 1e-12});
    r.parts.push_back({label(rep, "ftc"), check_value(rep, "ftc"), 1e-8});
  }
}

void c6_projection(const AcceptanceOptions& o, CriterionResult& r) {
  const auto rep = run_experiment("verify-thmmag", config_for(o, ScenarioKind::stationary_rot));
  r.parts.push_back({label(rep, "ode"), check_value(rep, "ode"), 1e-6});
  r.parts.push_back({label(rep, "k_drift"), check_value(rep, "k_drift"), 1e-7});
  r.parts.push_back({label(rep, "non_null_speed"), check_value(rep, "non_null_speed"), 1e-8});
  r.parts.push_back({label(rep, "lift"), check_value(rep, "lift"), 1e-6});
}

void c7_scattering_action(const AcceptanceOptions& o, CriterionResult& r) {
  const auto rep = run_experiment(
      "verify-thmmag",
      config_for(o, ScenarioKind::stationary_rot, [](ScenarioDescriptor& d) { d.grids.rays = 30; }));
  r.parts.push_back({label(rep, "exit"), residual_max(rep, "exit"), 1e-6});
  r.parts.push_back({label(rep, "length"), residual_max(rep, "length"), 1e-6});
  r.parts.push_back({label(rep, "action"), residual_max(rep, "action"), 1e-6});
  r.parts.push_back({label(rep, "round_trip"), check_value(rep, "round_trip"), 1e-5});
}

void c8_magnetic_michel(const AcceptanceOptions& o, CriterionResult& r) {
  for (ScenarioKind k : {ScenarioKind::stationary_rot, ScenarioKind::product_disk}) {
    RunConfig cfg = config_for(o, k);
    cfg.experiment = {{"fd_step", 1e-5}};
    const auto rep = run_experiment("magnetic-michel", cfg);
    r.parts.push_back({label(rep, "residual"), rep.max_residual, 1e-5});
  }
}

void c9_equivalence(const AcceptanceOptions& o, CriterionResult& r) {
  const auto rep = run_experiment(
      "lin-equivalence",
      config_for(o, ScenarioKind::stationary_rot, [](ScenarioDescriptor& d) { d.grids.pairs = 10; }));
  // Graded as stated; the corrected integrated factor and the integrand
  // identity are reported alongside so the failure mode is visible.
  r.parts.push_back({label(rep, "integrated_2l2"), rep.max_residual, 1e-6});
  r.parts.push_back({label(rep, "pointwise_2l2"), check_value(rep, "pointwise_2l2"), 1e-6});
  r.parts.push_back({label(rep, "integrated_2l"), check_value(rep, "integrated_2l"), 1e-6});
  r.parts.push_back({label(rep, "nondegenerate"), check_value(rep, "nondegenerate"), 1e-6, false});
  r.parts.push_back({label(rep, "records"), static_cast<double>(rep.records.size()), 30.0, false});
}

void c10_gauge(const AcceptanceOptions& o, CriterionResult& r) {
  const auto rep = run_experiment("gauge-invariance", config_for(o, ScenarioKind::stationary_rot));
  for (const char* t : {"interior_diffeomorphism", "time_shift_potential", "conformal_lambda",
                        "composition"}) {
    double m = 0.0;
    int n = 0;
    for (const auto& rec : rep.records) {
      if (rec.inputs.at("transform") == t) {
        m = std::max(m, rec.residual);
        ++n;
      }
    }
    r.parts.push_back({label(rep, t), n == 50 ? m : INFINITY, 1e-6});
  }
  r.parts.push_back({label(rep, "boundary_fixed"), check_value(rep, "boundary_fixed"), 1e-10});
}

void c11_reparam(const AcceptanceOptions& o, CriterionResult& r) {
  for (ScenarioKind k : {ScenarioKind::product_disk, ScenarioKind::perturbed_product}) {
    const auto rep = run_experiment("conformal-reparam", config_for(o, k));
    r.parts.push_back({label(rep, "gaussian"), rep.max_residual, 1e-6});
    r.parts.push_back({label(rep, "constant_deviation"), check_value(rep, "constant_deviation"), 1e-9});
    r.parts.push_back({label(rep, "alpha_rate"), check_value(rep, "alpha_rate"), 1e-9});
    r.parts.push_back({label(rep, "monotone_violations"), check_value(rep, "monotone"), 0.0});
  }
}

void c12_normal(const AcceptanceOptions& o, CriterionResult& r) {
  const auto rep = run_experiment("normal-coords", config_for(o, ScenarioKind::stationary_rot));
  r.parts.push_back({label(rep, "normal_component"), rep.max_residual, 1e-8});
  r.parts.push_back({label(rep, "phi_at_boundary"), check_value(rep, "phi_at_boundary"), 1e-14});
}

void c13_orders(const AcceptanceOptions& o, CriterionResult& r) {
  const OrderReport rk = rk4_endpoint_order(o.connect.integration);
  r.parts.push_back({"rk4_endpoint_order", rk.observed, 3.7, false});
  const OrderReport fd = fd_linearization_order(o.connect);
  r.parts.push_back({"central_fd_linearization_order", fd.observed, 1.8, false});
}

struct Entry {
  const char* title;
  void (*run)(const AcceptanceOptions&, CriterionResult&);
};

const Entry kCriteria[] = {
    {"speed invariants conserved (geodesic, magnetic, Hamiltonian)", c1_conservation},
    {"defining function trichotomy and single Sigma crossing", c2_trichotomy},
    {"gradients of r conormal to the scattering relation", c3_michel},
    {"first variation of r equals half the light ray transform", c4_linearization},
    {"light ray transform kills potentials and conformal multiples", c5_kernel},
    {"projected null geodesics solve the magnetic equation", c6_projection},
    {"scattering and action data match the magnetic system", c7_scattering_action},
    {"magnetic action gradients conormal to magnetic scattering", c8_magnetic_michel},
    {"Lorentzian and magnetic linearizations agree", c9_equivalence},
    {"scattering invariant under gauge and conformal changes", c10_gauge},
    {"conformal factor only reparametrizes the Hamiltonian flow", c11_reparam},
    {"boundary normal gauge removes the normal component", c12_normal},
    {"observed RK4 and central difference orders", c13_orders},
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  int id = 0;
  for (const auto& e : kCriteria) {
    CriterionResult r;
    r.id = ++id;
    r.title = e.title;
    const auto start = Clock::now();
    try {
      e.run(opts, r);
    } catch (const std::exception& ex) {
      r.error = ex.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace scatlab
