#include "scatlab/experiments.hpp"

#include "scatlab/lightray.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace scatlab {

using nlohmann::json;

json vec_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

template <class T>
T get_as(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key " + where + "." + key);
  }
}

ScenarioDescriptor parse_scenario(const json& j) {
  reject_unknown(j, {"name", "kind", "parameters", "grids", "tolerances"}, "scenario");
  if (!j.contains("kind")) throw ConfigError("scenario.kind is required");
  const auto kind_name = get_as<std::string>(j, "kind", "scenario");
  const auto kind = parse_kind(kind_name);
  if (!kind) throw ScenarioError("unknown scenario kind '" + kind_name + "'");
  ScenarioDescriptor d = default_descriptor(*kind);
  if (j.contains("name")) d.name = get_as<std::string>(j, "name", "scenario");
  if (j.contains("parameters")) {
    const json& p = j.at("parameters");
    if (!p.is_object()) throw ConfigError("scenario.parameters must be an object");
    for (const auto& [key, value] : p.items()) {
      if (!value.is_number()) throw ConfigError("scenario.parameters." + key + " must be a number");
      d.parameters[key] = value.get<double>();
    }
  }
  if (j.contains("grids")) {
    const json& g = j.at("grids");
    reject_unknown(g, {"rays", "pairs", "sweep_lines", "sweep_points"}, "scenario.grids");
    if (g.contains("rays")) d.grids.rays = get_as<int>(g, "rays", "scenario.grids");
    if (g.contains("pairs")) d.grids.pairs = get_as<int>(g, "pairs", "scenario.grids");
    if (g.contains("sweep_lines")) d.grids.sweep_lines = get_as<int>(g, "sweep_lines", "scenario.grids");
    if (g.contains("sweep_points")) {
      d.grids.sweep_points = get_as<int>(g, "sweep_points", "scenario.grids");
    }
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) throw ConfigError("scenario.tolerances must be an object");
    for (const auto& [key, value] : t.items()) {
      if (!value.is_number()) throw ConfigError("scenario.tolerances." + key + " must be a number");
      d.tolerances[key] = value.get<double>();
    }
  }
  validate_descriptor(d);
  return d;
}

}  // namespace

RunConfig parse_config(const json& j) {
  reject_unknown(j, {"scenario", "integration", "shooting", "experiment", "seed", "threads"},
                 "config");
  RunConfig cfg;
  if (j.contains("scenario")) cfg.scenario = parse_scenario(j.at("scenario"));
  if (j.contains("integration")) {
    const json& i = j.at("integration");
    reject_unknown(i, {"step", "max_steps", "sigma_budget", "surface_tol"}, "integration");
    auto& o = cfg.connect.integration;
    if (i.contains("step")) o.step = get_as<double>(i, "step", "integration");
    if (i.contains("max_steps")) o.max_steps = get_as<long>(i, "max_steps", "integration");
    if (i.contains("sigma_budget")) o.sigma_budget = get_as<double>(i, "sigma_budget", "integration");
    if (i.contains("surface_tol")) o.surface_tol = get_as<double>(i, "surface_tol", "integration");
    if (!(o.step > 0.0) || o.max_steps <= 0 || !(o.sigma_budget > 0.0) || !(o.surface_tol > 0.0)) {
      throw ConfigError("integration settings must be positive");
    }
  }
  if (j.contains("shooting")) {
    const json& s = j.at("shooting");
    reject_unknown(s, {"tol", "max_iter", "max_condition", "jacobian_step", "polish_iter"},
                   "shooting");
    auto& o = cfg.connect.shooting;
    if (s.contains("tol")) o.tol = get_as<double>(s, "tol", "shooting");
    if (s.contains("max_iter")) o.max_iter = get_as<int>(s, "max_iter", "shooting");
    if (s.contains("max_condition")) o.max_condition = get_as<double>(s, "max_condition", "shooting");
    if (s.contains("jacobian_step")) o.jacobian_step = get_as<double>(s, "jacobian_step", "shooting");
    if (s.contains("polish_iter")) o.polish_iter = get_as<int>(s, "polish_iter", "shooting");
    if (!(o.tol > 0.0) || o.max_iter <= 0 || !(o.jacobian_step > 0.0) || o.polish_iter < 0) {
      throw ConfigError("shooting settings out of range");
    }
  }
  if (j.contains("experiment")) {
    if (!j.at("experiment").is_object()) throw ConfigError("experiment must be an object");
    cfg.experiment = j.at("experiment");
  }
  if (j.contains("seed")) cfg.seed = get_as<std::uint64_t>(j, "seed", "config");
  if (j.contains("threads")) {
    cfg.threads = get_as<int>(j, "threads", "config");
    if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

// ---------------------------------------------------------------------------
// Reports

void ExperimentReport::finalize() {
  max_residual = 0.0;
  double sum = 0.0;
  for (const auto& r : records) {
    max_residual = std::max(max_residual, r.residual);
    sum += r.residual;
  }
  mean_residual = records.empty() ? 0.0 : sum / static_cast<double>(records.size());
  pass = std::isfinite(max_residual) && max_residual <= tolerance;
  for (const auto& c : checks) pass = pass && c.pass();
}

json to_json(const ExperimentReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["experiment"] = r.experiment;
  j["scenario"] = r.scenario;
  j["seed"] = r.seed;
  json recs = json::array();
  for (const auto& rec : r.records) {
    recs.push_back({{"inputs", rec.inputs},
                    {"outputs", rec.outputs},
                    {"residuals", rec.residuals},
                    {"residual", rec.residual}});
  }
  j["records"] = std::move(recs);
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"bound", c.bound},
                      {"relation", c.le ? "<=" : ">="},
                      {"pass", c.pass()}});
  }
  j["checks"] = std::move(checks);
  j["summary"] = {{"max_residual", r.max_residual},
                  {"mean_residual", r.mean_residual},
                  {"tolerance", r.tolerance},
                  {"pass", r.pass},
                  {"wall_time_s", r.wall_time_s}};
  j["notes"] = r.notes;
  return j;
}

std::string to_csv(const ExperimentReport& r) {
  // Flat columns: every scalar residual key seen in any record.
  std::vector<std::string> keys;
  for (const auto& rec : r.records) {
    for (const auto& [k, v] : rec.residuals.items()) {
      if (v.is_number() && std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    }
  }
  std::ostringstream out;
  out.precision(17);
  out << "index,residual";
  for (const auto& k : keys) out << ',' << k;
  out << '\n';
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const auto& rec = r.records[i];
    out << i << ',' << rec.residual;
    for (const auto& k : keys) {
      out << ',';
      if (rec.residuals.contains(k)) out << rec.residuals.at(k).get<double>();
    }
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Families and fields

namespace {

Vec spatial(const Vec& X) { return X.tail(X.size() - 1); }

// diag(0, h(x)) on (t, x) and its partials.
Mat spatial_block(const Scenario& s, const Vec& X) {
  const int n = static_cast<int>(X.size()) - 1;
  Mat out = Mat::Zero(n + 1, n + 1);
  out.block(1, 1, n, n) = s.metric.base.eval(spatial(X));
  return out;
}

MetricDerivative spatial_block_deriv(const Scenario& s, const Vec& X) {
  const int n = static_cast<int>(X.size()) - 1;
  const MetricDerivative dh = metric_derivative(s.metric.base, spatial(X));
  MetricDerivative out;
  out.partials[0] = Mat::Zero(n + 1, n + 1);
  for (int k = 0; k < n; ++k) {
    out.partials[k + 1] = Mat::Zero(n + 1, n + 1);
    out.partials[k + 1].block(1, 1, n, n) = dh.partials[k];
  }
  return out;
}

MetricField with_tensor(const MetricField& g, std::function<Mat(const Vec&)> eval,
                        std::function<MetricDerivative(const Vec&)> deriv) {
  MetricField out;
  out.dim = g.dim;
  out.signature = g.signature;
  out.domain = g.domain;
  out.eval = std::move(eval);
  out.deriv = std::move(deriv);
  return out;
}

ScalarField off_axis_gaussian(double radius) {
  Vec c(2);
  c << 0.2 * radius, -0.1 * radius;
  const double w = 2.0 / (radius * radius);
  ScalarField q;
  q.eval = [c, w](const Vec& x) { return std::exp(-w * (x - c).squaredNorm()); };
  q.gradient = [c, w](const Vec& x) {
    return Vec(-2.0 * w * std::exp(-w * (x - c).squaredNorm()) * (x - c));
  };
  return q;
}

double scenario_scale(const Scenario& s) { return s.is_disk() ? s.radius : 1.0; }

}  // namespace

MetricFamily bump_scale_family(const Scenario& s) {
  const ScalarField q = off_axis_gaussian(scenario_scale(s));
  MetricFamily fam;
  fam.eval = [s, q](double tau) {
    const MetricField& g = s.g();
    return with_tensor(
        g,
        [s, q, tau](const Vec& X) {
          return Mat(s.g().eval(X) + (std::exp(tau * q(spatial(X))) - 1.0) * spatial_block(s, X));
        },
        [s, q, tau](const Vec& X) {
          const Vec x = spatial(X);
          const double e = std::exp(tau * q(x));
          const Vec dq = gradient_of(q, x);
          const Mat H = spatial_block(s, X);
          const MetricDerivative dH = spatial_block_deriv(s, X);
          MetricDerivative out = metric_derivative(s.g(), X);
          for (int k = 1; k < X.size(); ++k) {
            out.partials[k] += tau * e * dq(k - 1) * H + (e - 1.0) * dH.partials[k];
          }
          return out;
        });
  };
  fam.derivative_at_0 = SymTwoTensorField{3, [s, q](const Vec& X) {
                                            return Mat(q(spatial(X)) * spatial_block(s, X));
                                          }};
  return fam;
}

MetricFamily spatial_scale_family(const Scenario& s) {
  MetricFamily fam;
  fam.eval = [s](double tau) {
    return with_tensor(
        s.g(), [s, tau](const Vec& X) { return Mat(s.g().eval(X) + tau * spatial_block(s, X)); },
        [s, tau](const Vec& X) {
          MetricDerivative out = metric_derivative(s.g(), X);
          const MetricDerivative dH = spatial_block_deriv(s, X);
          for (int k = 0; k < X.size(); ++k) out.partials[k] += tau * dH.partials[k];
          return out;
        });
  };
  fam.derivative_at_0 =
      SymTwoTensorField{3, [s](const Vec& X) { return spatial_block(s, X); }};
  return fam;
}

MetricFamily conformal_family(const Scenario& s) {
  const ScalarField c = off_axis_gaussian(scenario_scale(s));
  MetricFamily fam;
  fam.eval = [s, c](double tau) {
    return with_tensor(
        s.g(),
        [s, c, tau](const Vec& X) { return Mat((1.0 + tau * c(spatial(X))) * s.g().eval(X)); },
        [s, c, tau](const Vec& X) {
          const Vec x = spatial(X);
          const Vec dc = gradient_of(c, x);
          const Mat gx = s.g().eval(X);
          MetricDerivative out = metric_derivative(s.g(), X);
          const double f = 1.0 + tau * c(x);
          out.partials[0] *= f;
          for (int k = 1; k < X.size(); ++k) {
            out.partials[k] = f * out.partials[k] + tau * dc(k - 1) * gx;
          }
          return out;
        });
  };
  fam.derivative_at_0 = SymTwoTensorField{
      3, [s, c](const Vec& X) { return Mat(c(spatial(X)) * s.g().eval(X)); }};
  return fam;
}

CovectorField interior_potential(const Scenario& s) {
  Vec center(3);
  double r0 = 0.0;
  if (s.is_disk()) {
    center << s.radius, 0.0, 0.0;
    r0 = 0.8 * s.radius;
  } else {
    center << 0.6, 0.5, 0.0;
    r0 = 0.45;
  }
  const ScalarField b = bump(r0, 1.0, center);
  Vec dir(3);
  dir << 0.3, 1.0, -0.5;
  CovectorField v;
  v.dim = 3;
  v.eval = [b, dir](const Vec& X) { return Vec(b(X) * dir); };
  v.jacobian = [b, dir](const Vec& X) {
    return Mat(gradient_of(b, X) * dir.transpose());
  };
  return v;
}

CovectorField affine_covector(const Vec& a, const Mat& b) {
  CovectorField v;
  v.dim = static_cast<int>(a.size());
  v.eval = [a, b](const Vec& x) { return Vec(a + b * x); };
  v.jacobian = [b](const Vec&) { return Mat(b.transpose()); };
  return v;
}

MetricFamily potential_family(const Scenario& s) {
  const SymTwoTensorField f = sym_diff(interior_potential(s), s.g());
  MetricFamily fam;
  fam.eval = [s, f](double tau) {
    return with_tensor(
        s.g(), [s, f, tau](const Vec& X) { return Mat(s.g().eval(X) + tau * f(X)); },
        [s, f, tau](const Vec& X) {
          MetricDerivative out = metric_derivative(s.g(), X);
          for (int k = 0; k < X.size(); ++k) {
            const double h = 1e-5 * std::max(1.0, X.norm());
            Vec p = X, m = X;
            p(k) += h;
            m(k) -= h;
            out.partials[k] += tau * (f(p) - f(m)) / (2.0 * h);
          }
          return out;
        });
  };
  fam.derivative_at_0 = f;
  return fam;
}

// ---------------------------------------------------------------------------
// Experiments

namespace {

using Clock = std::chrono::steady_clock;

double tolerance_or(const Scenario& s, double fallback) {
  auto it = s.desc.tolerances.find("residual");
  return it == s.desc.tolerances.end() ? fallback : it->second;
}

double max_over(const std::vector<Record>& recs, const char* key) {
  double m = 0.0;
  for (const auto& r : recs) {
    if (r.residuals.contains(key)) m = std::max(m, r.residuals.at(key).get<double>());
  }
  return m;
}

void require_disk(const Scenario& s, const std::string& command) {
  if (!s.is_disk()) throw ScenarioError(command + " needs a disk scenario");
}

double conservation_drift(const MetricField& g, const GeodesicPath& p) {
  double worst = 0.0;
  for (const auto& q : p.samples) {
    worst = std::max(worst, std::abs(inner(g, q.x, q.v, q.v) - p.speed_squared));
  }
  return worst;
}

// -- scatter ----------------------------------------------------------------

void exp_scatter(const Scenario& s, const RunConfig& cfg, ExperimentReport& rep) {
  const auto rays = ray_grid(s, s.desc.grids.rays);
  const auto& io = cfg.connect.integration;
  rep.records = parallel_map(rays.size(), cfg.threads, [&](std::size_t i) {
    const auto& ray = rays[i];
    auto [rec, path] = trace_ray(s.g(), s.entry, s.exit, ray.x, ray.v_proj, io);
    const GeodesicPath exact = integrate_geodesic(s.g(), ray.x, rec.v_full, StopAtSurface{&s.exit}, io);
    const ScatteringRecord again = scatter(s.g(), s.entry, s.exit, ray.x, ray.v_proj, io);
    double homogeneity = 0.0;
    for (double a : {0.5, 2.0, 10.0}) {
      const ScatteringRecord sc = scatter(s.g(), s.entry, s.exit, ray.x, a * ray.v_proj, io);
      homogeneity = std::max({homogeneity, (sc.y - rec.y).norm(),
                              (sc.w_proj - a * rec.w_proj).norm() / (a * rec.w_proj.norm())});
    }
    const Vec nu = boundary_normal(s.exit, s.g(), rec.y);
    Record r;
    r.inputs = {{"x", vec_json(ray.x)}, {"v_proj", vec_json(ray.v_proj)}};
    r.outputs = {{"y", vec_json(rec.y)}, {"w_proj", vec_json(rec.w_proj)}, {"travel", rec.travel}};
    r.residuals = {
        {"surface", std::abs(s.exit.defining(rec.y))},
        {"tangency", std::abs(inner(s.g(), rec.y, rec.w_proj, nu))},
        {"conservation", std::max(conservation_drift(s.g(), path), conservation_drift(s.g(), exact))},
        {"reshoot", (again.y - rec.y).norm() + (again.w_proj - rec.w_proj).norm()},
        {"homogeneity", homogeneity},
        {"time_orientation", (rec.w_full(0) > 0.0) == (rec.v_full(0) > 0.0) ? 0.0 : 1.0},
    };
    double worst = 0.0;
    for (const auto& [_, v] : r.residuals.items()) worst = std::max(worst, v.get<double>());
    r.residual = worst;
    return r;
  });
  rep.tolerance = tolerance_or(s, 1e-8);
  rep.checks.push_back({"conservation", max_over(rep.records, "conservation"), 1e-8});
}

// -- connect ----------------------------------------------------------------

void exp_connect(const Scenario& s, const RunConfig& cfg, ExperimentReport& rep) {
  const auto pairs = pair_grid(s, s.desc.grids.pairs);
  ConnectOptions fine = cfg.connect;
  fine.integration.step *= 0.5;
  const bool flat_product = s.desc.kind == ScenarioKind::product_disk ||
                            s.desc.kind == ScenarioKind::minkowski_slab;
  struct Job {
    Vec x, y;
  };
  std::vector<Job> jobs;
  for (const auto& [x, y] : pairs) {
    for (double f : {0.5, 2.0}) {
      Vec yy = y;
      yy(0) = x(0) + f * (y(0) - x(0));
      jobs.push_back({x, yy});
    }
  }
  rep.records = parallel_map(jobs.size(), cfg.threads, [&](std::size_t i) {
    const auto& [x, y] = jobs[i];
    const ConnectingGeodesic c = connecting_geodesic(s.g(), x, y, std::nullopt, cfg.connect);
    const ConnectingGeodesic ref = connecting_geodesic(s.g(), x, y, c.path.front().v, fine);
    const auto& sm = c.path.samples;
    const auto& mid = sm[sm.size() / 2];
    const double e0 = 0.5 * inner(s.g(), sm.front().x, sm.front().v, sm.front().v);
    const double em = 0.5 * inner(s.g(), mid.x, mid.v, mid.v);
    const double e1 = 0.5 * inner(s.g(), sm.back().x, sm.back().v, sm.back().v);
    const bool sign_ok = (c.energy < 0.0) == (c.causal.tag == Causal::timelike) ||
                         c.causal.tag == Causal::lightlike;
    Record r;
    r.inputs = {{"x", vec_json(x)}, {"y", vec_json(y)}};
    r.outputs = {{"energy", c.energy},
                 {"causal", to_string(c.causal.tag)},
                 {"iterations", c.iterations}};
    r.residuals = {{"endpoint", (sm.back().x - y).norm()},
                   {"parametrization", std::max({std::abs(e0 - em), std::abs(e0 - e1)})},
                   {"step_halving", std::abs(c.energy - ref.energy)},
                   {"trichotomy", sign_ok ? 0.0 : 1.0}};
    if (flat_product) {
      const double rho = (Vec(y.tail(2)) - Vec(x.tail(2))).norm();
      const double dt = y(0) - x(0);
      r.residuals["closed_form"] = std::abs(c.energy - 0.5 * (rho * rho - dt * dt));
    }
    double worst = 0.0;
    for (const auto& [_, v] : r.residuals.items()) worst = std::max(worst, v.get<double>());
    r.residual = worst;
    return r;
  });
  rep.tolerance = tolerance_or(s, 1e-8);
}

// -- defining-r-sweep ---------------------------------------------------------

void exp_sweep(const Scenario& s, const RunConfig& cfg, ExperimentReport& rep) {
  const auto lines = pair_grid(s, s.desc.grids.sweep_lines);
  const int points = s.desc.grids.sweep_points;
  const bool flat_product = s.desc.kind == ScenarioKind::product_disk ||
                            s.desc.kind == ScenarioKind::minkowski_slab;
  rep.records = parallel_map(lines.size(), cfg.threads, [&](std::size_t i) {
    const auto& [x, y0] = lines[i];
    const double chord = y0(0) - x(0);
    std::vector<double> rs, dts;
    double rel = 0.0, trichotomy = 0.0;
    std::optional<Vec> seed;
    for (int j = 0; j < points; ++j) {
      const double dt = chord * (0.5 + 1.5 * (j + 0.5) / points);
      Vec y = y0;
      y(0) = x(0) + dt;
      const ConnectingGeodesic c = connecting_geodesic(s.g(), x, y, seed, cfg.connect);
      seed = c.path.front().v;
      rs.push_back(c.energy);
      dts.push_back(dt);
      const Causal from_sign =
          c.energy < 0.0 ? Causal::timelike : (c.energy > 0.0 ? Causal::spacelike : Causal::lightlike);
      if (c.causal.tag != Causal::lightlike && c.causal.tag != from_sign) trichotomy = 1.0;
      if (flat_product) {
        const double rho = (Vec(y.tail(2)) - Vec(x.tail(2))).norm();
        const double exact = 0.5 * (rho * rho - dt * dt);
        rel = std::max(rel, std::abs(c.energy - exact) / std::abs(exact));
      }
    }
    int changes = 0;
    std::size_t cross = 0;
    for (std::size_t j = 1; j < rs.size(); ++j) {
      if ((rs[j - 1] > 0.0) != (rs[j] > 0.0)) {
        ++changes;
        cross = j;
      }
    }
    double bracket = 1.0;
    double root = 0.0;
    if (changes == 1) {
      Vec guess = y0;
      guess(0) = x(0) + 0.5 * (dts[cross - 1] + dts[cross]);
      const SigmaPair sp = solve_sigma_pair(s.g(), x, guess, x(0) + dts[cross - 1],
                                            x(0) + dts[cross], std::nullopt, cfg.connect);
      root = sp.y(0) - x(0);
      bracket = 0.0;
      if (flat_product) {
        const double rho = (Vec(y0.tail(2)) - Vec(x.tail(2))).norm();
        bracket = std::abs(root - rho);
      }
    }
    Record r;
    r.inputs = {{"x", vec_json(x)}, {"y_space", vec_json(Vec(y0.tail(2)))}};
    r.outputs = {{"r", rs}, {"dt", dts}, {"sign_changes", changes}, {"sigma_time", root}};
    r.residuals = {{"relative_closed_form", rel},
                   {"trichotomy", trichotomy},
                   {"single_crossing", changes == 1 ? 0.0 : 1.0},
                   {"root", bracket}};
    r.residual = std::max({rel, trichotomy, changes == 1 ? 0.0 : 1.0, bracket});
    return r;
  });
  rep.tolerance = tolerance_or(s, 1e-8);
}

// -- michel -------------------------------------------------------------------

void exp_michel(const Scenario& s, const RunConfig& cfg, ExperimentReport& rep) {
  const auto pairs = pair_grid(s, s.desc.grids.pairs);
  MichelOptions mo;
  mo.connect = cfg.connect;
  rep.records = parallel_map(pairs.size(), cfg.threads, [&](std::size_t i) {
    const auto& [x, y] = pairs[i];
    const double s0 = y(0) - x(0);
    const SigmaPair sp =
        solve_sigma_pair(s.g(), x, y, x(0) + 0.5 * s0, x(0) + 2.0 * s0, Vec(y - x), cfg.connect);
    const MichelResidual m = michel_check(s.g(), s.entry, s.exit, sp.x, sp.y, mo,
                                          sp.connector.path.front().v);
    Record r;
    r.inputs = {{"x", vec_json(sp.x)}, {"y", vec_json(sp.y)}};
    r.outputs = {{"grad_x", vec_json(m.grad_x)},
                 {"grad_y", vec_json(m.grad_y)},
                 {"scale", m.scale},
                 {"r", sp.connector.energy}};
    r.residuals = {{"position", m.position}, {"covector", m.covector}};
    r.residual = std::max(m.position, m.covector);
    return r;
  });
  rep.tolerance = tolerance_or(s, 1e-5);
}

// -- verify-thm1 ----------------------------------------------------------------

MetricFamily family_by_name(const Scenario& s, const std::string& name) {
  if (name == "bump_scale") return bump_scale_family(s);
  if (name == "spatial_scale") return spatial_scale_family(s);
  if (name == "conformal") return conformal_family(s);
  if (name == "potential") return potential_family(s);
  throw ConfigError("unknown family '" + name + "'");
}

void exp_thm1(const Scenario& s, const RunConfig& cfg, ExperimentReport& rep) {
  const std::string family = cfg.experiment.value("family", std::string("bump_scale"));
  const double fd_step = cfg.experiment.value("fd_step", 1e-4);
  const bool gauge = family == "conformal" || family == "potential";
  const MetricFamily fam = family_by_name(s, family);
  const auto pairs = sigma_pairs(s, s.desc.grids.pairs, cfg.connect);
  rep.records = parallel_map(pairs.size(), cfg.threads, [&](std::size_t i) {
    const SigmaPair& sp = pairs[i];
    const LinearizationReport lr =
        linearize_r(fam, sp.x, sp.y, fd_step, cfg.connect, sp.connector.path.front().v);
    Record r;
    r.inputs = {{"x", vec_json(sp.x)}, {"y", vec_json(sp.y)}, {"fd_step", fd_step}};
    r.outputs = {{"fd_value", lr.fd_value}, {"lrt_value", lr.lrt_value}, {"kappa", lr.kappa}};
    r.residuals = {{"rel_error", lr.rel_error},
                   {"abs_fd", std::abs(lr.fd_value)},
                   {"abs_lrt", std::abs(lr.kappa * lr.lrt_value)}};
    r.residual = gauge ? std::max(std::abs(lr.fd_value), std::abs(lr.kappa * lr.lrt_value))
                       : lr.rel_error;
    return r;
  });
  rep.tolerance = tolerance_or(s, gauge ? 1e-6 : 1e-3);
  rep.notes["family"] = family;
  rep.notes["residual"] = gauge ? "max(|fd|, |lrt/2|)" : "relative error against lrt/2";
}

// -- kernel-tests -----------------------------------------------------------------

void exp_kernel(const Scenario& s, const RunConfig& cfg, ExperimentReport& rep) {
  const auto rays = ray_grid(s, s.desc.grids.rays);
  const CovectorField v = interior_potential(s);
  const SymTwoTensorField dsv = sym_diff(v, s.g());

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vec a(3);
  Mat b(3, 3), q(3, 3);
  for (int i = 0; i < 3; ++i) a(i) = unif(rng);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b(i, j) = unif(rng), q(i, j) = unif(rng);
  const Vec p1 = a;
  const CovectorField poly = affine_covector(a, b);
  const SymTwoTensorField ds_poly = sym_diff(poly, s.g());
  ScalarField gauss;
  gauss.eval = [](const Vec& X) { return std::exp(-spatial(X).squaredNorm()) * (1.0 + 0.3 * X(0)); };
  ScalarField random_poly;
  random_poly.eval = [p1, q](const Vec& X) { return 0.7 + p1.dot(X) + X.dot(q * X); };

  rep.records = parallel_map(rays.size(), cfg.threads, [&](std::size_t i) {
    const auto [rec, path] =
        trace_ray(s.g(), s.entry, s.exit, rays[i].x, rays[i].v_proj, cfg.connect.integration);
    const std::vector<GeodesicPath> one{path};
    const double pot = kernel_potential_test(v, s.g(), one);
    const double conf = std::max(kernel_conformal_test(gauss, s.g(), one),
                                 kernel_conformal_test(random_poly, s.g(), one));
    const double ftc =
        std::abs(light_ray_transform(ds_poly, path) - endpoint_pairing_difference(poly, path));
    Record r;
    r.inputs = {{"x", vec_json(rays[i].x)}, {"v_proj", vec_json(rays[i].v_proj)}};
    r.outputs = {{"travel", rec.travel}};
    r.residuals = {{"potential", pot}, {"conformal", conf}, {"ftc", ftc}};
    r.residual = pot;
    return r;
  });
  rep.tolerance = tolerance_or(s, 1e-8);
  rep.checks.push_back({"conformal", max_over(rep.records, "conformal"), 1e-12});
  rep.checks.push_back({"ftc", max_over(rep.records, "ftc"), 1e-8});
  rep.notes["residual"] = "max |L(d^s v)| for the interior bump potential";
}

// -- verify-thmmag --------------------------------------------------------------------

StationaryMetric unit_lambda(const Scenario& s, ExperimentReport& rep) {
  const Vec probe = Vec::Zero(s.metric.base.dim);
  if (std::abs(s.metric.lambda(probe) - 1.0) > 0.0 || s.desc.kind == ScenarioKind::custom) {
    rep.notes["lambda"] = "normalized to 1";
    return conformal_normalize(s.metric);
  }
  return s.metric;
}

void exp_thmmag(const Scenario& s, const RunConfig& cfg, ExperimentReport& rep) {
  require_disk(s, "verify-thmmag");
  const StationaryMetric m = unit_lambda(s, rep);
  const BoundaryHypersurface cyl = cylinder_over(*s.base_boundary);
  const auto rays = ray_grid(s, s.desc.grids.rays);
  const auto& io = cfg.connect.integration;
  rep.records = parallel_map(rays.size(), cfg.threads, [&](std::size_t i) {
    const auto& ray = rays[i];
    const ThmMagResiduals t = thmmag_verify(m, *s.base_boundary, ray.x, ray.v_proj, cfg.connect);
    const GeodesicPath lor =
        integrate_geodesic(m.assembled, ray.x, t.lorentzian.v_full, StopAtSurface{&cyl}, io);
    const GeodesicPath uniform =
        integrate_geodesic(m.assembled, ray.x, t.lorentzian.v_full, StopAtSigma{t.lorentzian.travel}, io);
    const ProjectionResiduals pr = project_and_verify(m, uniform);
    const GeodesicPath lifted = lift_magnetic(m, t.magnetic.path, ray.x(0));
    double lift = 0.0;
    const std::size_t common = std::min(lifted.samples.size(), lor.samples.size());
    for (std::size_t k = 0; k < common; ++k) {
      lift = std::max(lift, (lifted.samples[k].x - lor.samples[k].x).norm() +
                                (lifted.samples[k].v - lor.samples[k].v).norm());
    }
    double magnetic_speed = 0.0;
    for (const auto& q : t.magnetic.path.samples) {
      magnetic_speed = std::max(magnetic_speed, std::abs(std::sqrt(inner(m.base, q.x, q.v, q.v)) - 1.0));
    }
    Record r;
    r.inputs = {{"x", vec_json(ray.x)}, {"v_proj", vec_json(ray.v_proj)}};
    r.outputs = {{"y", vec_json(t.lorentzian.y)},
                 {"w_proj", vec_json(t.lorentzian.w_proj)},
                 {"magnetic_length", t.magnetic.length},
                 {"flux", t.magnetic.flux},
                 {"action", t.connector_action}};
    r.residuals = {{"exit", t.exit},
                   {"length", t.length},
                   {"action", t.action},
                   {"exit_time_component", t.exit_time_component},
                   {"round_trip", t.round_trip},
                   {"ode", pr.ode_residual},
                   {"k_drift", pr.k_drift},
                   {"lift", lift},
                   {"magnetic_speed", magnetic_speed}};
    r.residual = std::max({t.exit, t.length, t.action});
    return r;
  });

  // Non-null geodesics: (g', g') = -k^2 + m^2 with k, m frozen at the start.
  double nonnull = 0.0;
  const double scale = s.radius;
  for (int i = 0; i < 6; ++i) {
    Vec X(3), V(3);
    X << 0.0, 0.3 * scale * std::cos(i), -0.2 * scale * std::sin(i);
    V << (i % 2 ? 1.5 : 0.4), 0.8 * std::cos(2.0 * i), 0.8 * std::sin(2.0 * i);
    const GeodesicPath p = integrate_geodesic(m.assembled, X, V, StopAtSigma{0.5 * scale}, io);
    const double k = time_invariant(m, X, V);
    const Vec u = V.tail(2);
    const double m2 = inner(m.base, Vec(X.tail(2)), u, u);
    for (const auto& q : p.samples) {
      nonnull = std::max(nonnull, std::abs(inner(m.assembled, q.x, q.v, q.v) - (-k * k + m2)));
    }
  }
  rep.tolerance = tolerance_or(s, 1e-6);
  rep.checks.push_back({"exit_time_component", max_over(rep.records, "exit_time_component"), 1e-8});
  rep.checks.push_back({"round_trip", max_over(rep.records, "round_trip"), 1e-5});
  rep.checks.push_back({"ode", max_over(rep.records, "ode"), 1e-6});
  rep.checks.push_back({"k_drift", max_over(rep.records, "k_drift"), 1e-7});
  rep.checks.push_back({"lift", max_over(rep.records, "lift"), 1e-6});
  rep.checks.push_back({"magnetic_speed", max_over(rep.records, "magnetic_speed"), 1e-8});
  rep.checks.push_back({"non_null_speed", nonnull, 1e-8});
}

// -- magnetic-michel ----------------------------------------------------------------------

void exp_mag_michel(const Scenario& s, const RunConfig& cfg, ExperimentReport& rep) {
  require_disk(s, "magnetic-michel");
  const MagneticSystem mag = magnetic_system(s.metric);
  const auto pairs = pair_grid(s, s.desc.grids.pairs);
  const double fd_step = cfg.experiment.value("fd_step", 1e-5);
  rep.records = parallel_map(pairs.size(), cfg.threads, [&](std::size_t i) {
    const Vec x = pairs[i].first.tail(2), y = pairs[i].second.tail(2);
    const MagneticMichelResidual mm = magnetic_michel(mag, *s.base_boundary, x, y, fd_step, cfg.connect);
    Record r;
    r.inputs = {{"x", vec_json(x)}, {"y", vec_json(y)}};
    r.outputs = {{"action", action_A(mag, x, y, std::nullopt, cfg.connect)}};
    r.residuals = {{"entry", mm.entry}, {"exit", mm.exit}};
    r.residual = std::max(mm.entry, mm.exit);
    return r;
  });
  rep.tolerance = tolerance_or(s, 1e-5);
}

// -- lin-equivalence ----------------------------------------------------------------------

struct Perturbation {
  std::string name;
  SymTwoTensorField dh;
  CovectorField dw;
};

std::vector<Perturbation> equivalence_perturbations(const Scenario& s) {
  const double R = s.radius;
  // Supports cover the whole disk so no connector misses them.
  const ScalarField bh = bump(1.3 * R, 1.0, (Vec(2) << 0.1 * R, 0.2 * R).finished());
  const ScalarField bw = bump(1.3 * R, 1.0, (Vec(2) << -0.15 * R, 0.05 * R).finished());
  const SymTwoTensorField dh{2, [bh](const Vec& x) {
                               Mat m(2, 2);
                               m << 1.0, 0.3, 0.3, 0.5;
                               return Mat(bh(x) * m);
                             }};
  const CovectorField dw{2, [bw](const Vec& x) {
                           return Vec(bw(x) * (Vec(2) << 0.4, -0.7).finished());
                         }};
  return {{"delta_h", dh, zero_covector(2)},
          {"delta_omega", zero_tensor(2), dw},
          {"mixed", dh, dw}};
}

void exp_lin_equiv(const Scenario& s, const RunConfig& cfg, ExperimentReport& rep) {
  require_disk(s, "lin-equivalence");
  const StationaryMetric m = unit_lambda(s, rep);
  const auto perts = equivalence_perturbations(s);
  const auto pairs = pair_grid(s, s.desc.grids.pairs);
  const std::size_t jobs = pairs.size() * perts.size();
  rep.records = parallel_map(jobs, cfg.threads, [&](std::size_t i) {
    const auto& pair = pairs[i / perts.size()];
    const auto& pert = perts[i % perts.size()];
    const Vec x = pair.first.tail(2), y = pair.second.tail(2);
    const EquivalenceReport e = linearization_equivalence(m, pert.dh, pert.dw, x, y, 0.0, cfg.connect);
    Record r;
    r.inputs = {{"x", vec_json(x)}, {"y", vec_json(y)}, {"perturbation", pert.name}};
    r.outputs = {{"lorentzian_value", e.lorentzian_value},
                 {"magnetic_value", e.magnetic_value},
                 {"length", e.length},
                 {"ratio", e.ratio},
                 {"ratio_over_2l2", e.ratio / (2.0 * e.length * e.length)},
                 {"ratio_over_2l", e.ratio / (2.0 * e.length)}};
    r.residuals = {{"integrated_2l2", e.integrated_l2},
                   {"pointwise_2l2", e.pointwise},
                   {"integrated_2l", e.integrated},
                   {"magnetic_magnitude", std::abs(e.magnetic_value)}};
    r.residual = e.integrated_l2;
    return r;
  });
  double smallest = INFINITY;
  for (const auto& r : rep.records) {
    smallest = std::min(smallest, r.residuals.at("magnetic_magnitude").get<double>());
  }
  rep.tolerance = tolerance_or(s, 1e-6);
  rep.checks.push_back({"pointwise_2l2", max_over(rep.records, "pointwise_2l2"), 1e-6});
  rep.checks.push_back({"integrated_2l", max_over(rep.records, "integrated_2l"), 1e-6});
  rep.checks.push_back({"nondegenerate", smallest, 1e-6, false});
  rep.notes["residual"] = "relative mismatch of L(f) = 2 l^2 I[dh/2, -dw] as integrals";
  rep.notes["known_failure"] =
      "the [0,1] and unit-speed parametrizations differ by d sigma = d s / l, so the integrands "
      "match with 2 l^2 but the integrals match with 2 l; compare ratio_over_2l and "
      "ratio_over_2l2";
}

// -- gauge-invariance -------------------------------------------------------------------------

void exp_gauge(const Scenario& s, const RunConfig& cfg, ExperimentReport& rep) {
  require_disk(s, "gauge-invariance");
  const double R = s.radius;
  const GaugePair twist{twist_map(0.3, 0.8 * R), constant_scalar(0.0)};
  const GaugePair shift{identity_map(2), bump(0.8 * R, 0.3, (Vec(2) << 0.1 * R, 0.0).finished())};
  ScalarField mu;
  mu.positive = true;
  mu.eval = [](const Vec& x) { return 1.0 + 0.5 * std::exp(-x.squaredNorm()); };
  mu.gradient = [](const Vec& x) { return Vec(-std::exp(-x.squaredNorm()) * x); };

  struct Transform {
    std::string name;
    StationaryMetric metric;
  };
  const std::vector<Transform> transforms{
      {"interior_diffeomorphism", apply_gauge(twist, s.metric)},
      {"time_shift_potential", apply_gauge(shift, s.metric)},
      {"conformal_lambda", conformal_scale(s.metric, mu)},
      {"composition", conformal_scale(apply_gauge(compose_gauge(twist, shift), s.metric), mu)},
  };
  std::vector<Vec> edge;
  for (int i = 0; i < 16; ++i) {
    edge.push_back((Vec(2) << R * std::cos(0.4 * i), R * std::sin(0.4 * i)).finished());
  }
  const double defect = std::max({boundary_defect(twist, edge), boundary_defect(shift, edge),
                                  boundary_defect(compose_gauge(twist, shift), edge)});

  const auto rays = ray_grid(s, s.desc.grids.rays);
  const std::size_t jobs = rays.size() * transforms.size();
  rep.records = parallel_map(jobs, cfg.threads, [&](std::size_t i) {
    const auto& tr = transforms[i / rays.size()];
    const auto& ray = rays[i % rays.size()];
    const InvarianceReport ir = invariance_check(s.g(), tr.metric.assembled, s.entry, s.exit,
                                                 {ray}, cfg.connect.integration);
    Record r;
    r.inputs = {{"transform", tr.name}, {"x", vec_json(ray.x)}, {"v_proj", vec_json(ray.v_proj)}};
    r.residuals = {{"deviation", ir.max_deviation}};
    r.residual = ir.max_deviation;
    return r;
  });
  rep.tolerance = tolerance_or(s, 1e-6);
  rep.checks.push_back({"boundary_fixed", defect, 1e-10});
}

// -- conformal-reparam ----------------------------------------------------------------------------

void exp_reparam(const Scenario& s, const RunConfig& cfg, ExperimentReport& rep) {
  const auto rays = ray_grid(s, std::min(5, s.desc.grids.rays));
  const double span = cfg.experiment.value("sigma_max", s.is_disk() ? s.radius : 0.8);
  ScalarField gauss;
  gauss.positive = true;
  gauss.eval = [](const Vec& X) { return 1.0 + 0.5 * std::exp(-spatial(X).squaredNorm()); };
  gauss.gradient = [](const Vec& X) {
    Vec g = Vec::Zero(X.size());
    g.tail(X.size() - 1) = -std::exp(-spatial(X).squaredNorm()) * spatial(X);
    return g;
  };
  struct Factor {
    std::string name;
    ScalarField c;
    double constant;  // 0 for the non-constant factor
  };
  const std::vector<Factor> factors{{"gaussian", gauss, 0.0},
                                    {"constant_4", constant_scalar(4.0), 4.0},
                                    {"constant_2", constant_scalar(2.0), 2.0}};
  const std::size_t jobs = rays.size() * factors.size();
  rep.records = parallel_map(jobs, cfg.threads, [&](std::size_t i) {
    const auto& ray = rays[i / factors.size()];
    const auto& fac = factors[i % factors.size()];
    const Vec v = lightlike_completion(s.g(), s.entry, ray.x, ray.v_proj, -1);
    const Vec xi = s.g().eval(ray.x) * v;
    const ReparamReport rr = conformal_reparam_check(s.g(), fac.c, ray.x, xi, span, cfg.connect.integration);
    const auto plain = hamiltonian_flow(s.g(), ray.x, xi, std::nullopt, span, cfg.connect.integration);
    double h_drift = rr.h_drift;
    for (const auto& st : plain) h_drift = std::max(h_drift, std::abs(hamiltonian(s.g(), st.x, st.xi)));
    Record r;
    r.inputs = {{"factor", fac.name}, {"x", vec_json(ray.x)}, {"xi", vec_json(xi)}, {"sigma_max", span}};
    r.outputs = {{"alpha_end", rr.alpha_end}, {"monotone", rr.monotone}};
    r.residuals = {{"deviation", rr.deviation},
                   {"h_drift", h_drift},
                   {"monotone", rr.monotone ? 0.0 : 1.0}};
    if (fac.constant > 0.0) {
      r.residuals["alpha_rate"] = std::abs(rr.alpha_end - span / fac.constant);
      r.residuals["constant_deviation"] = rr.deviation;
      r.residual = 0.0;
    } else {
      r.residual = rr.deviation;
    }
    return r;
  });
  rep.tolerance = tolerance_or(s, 1e-6);
  rep.checks.push_back({"constant_deviation", max_over(rep.records, "constant_deviation"), 1e-9});
  rep.checks.push_back({"alpha_rate", max_over(rep.records, "alpha_rate"), 1e-9});
  rep.checks.push_back({"h_drift", max_over(rep.records, "h_drift"), 1e-9});
  rep.checks.push_back({"monotone", max_over(rep.records, "monotone"), 0.0});
  rep.notes["residual"] = "flow composition deviation for the Gaussian factor";
}

// -- normal-coords ------------------------------------------------------------------------------------

void exp_normal(const Scenario& s, const RunConfig& cfg, ExperimentReport& rep) {
  require_disk(s, "normal-coords");
  const double R = s.radius;
  const double B = s.desc.parameters.count("B") ? s.param("B") : 0.0;
  Vec offset(2);
  offset << cfg.experiment.value("offset_x", 0.3), cfg.experiment.value("offset_y", -0.2);
  // Base in boundary normal coordinates (theta, n) with n = R - r; the form
  // is the rotational field around an off-center point, so omega_n != 0.
  auto to_cart = [R](const Vec& p) {
    const double r = R - p(1);
    return (Vec(2) << r * std::cos(p(0)), r * std::sin(p(0))).finished();
  };
  auto jac = [R](const Vec& p) {
    const double r = R - p(1);
    Mat j(2, 2);
    j << -r * std::sin(p(0)), -std::cos(p(0)), r * std::cos(p(0)), -std::sin(p(0));
    return j;
  };
  CovectorField omega{2, [=](const Vec& p) {
                        const Vec x = to_cart(p);
                        const Vec w = (Vec(2) << -0.5 * B * (x(1) - offset(1)),
                                       0.5 * B * (x(0) - offset(0)))
                                          .finished();
                        return Vec(jac(p).transpose() * w);
                      }};
  const NormalGauge ng = boundary_normal_coords(omega, 1);
  MetricField h;
  h.dim = 2;
  h.signature = Signature::riemannian;
  h.eval = [R](const Vec& p) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = (R - p(1)) * (R - p(1));
    m(1, 1) = 1.0;
    return m;
  };
  const StationaryMetric before = make_stationary(constant_scalar(1.0), omega, h);
  const StationaryMetric after = make_stationary(constant_scalar(1.0), ng.transformed, h);

  std::vector<Vec> grid;
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 6; ++j) {
      grid.push_back((Vec(2) << 2.0 * std::numbers::pi * i / 12.0, 0.05 * R * j).finished());
    }
  }
  rep.records = parallel_map(grid.size(), cfg.threads, [&](std::size_t i) {
    const Vec& p = grid[i];
    const Vec w = ng.transformed(p);
    // t' = t + phi: the pulled-back new metric must equal the old one.
    const Vec dphi = fd_gradient(ng.phi.eval, p);
    Mat J = Mat::Identity(3, 3);
    J(0, 1) = dphi(0);
    J(0, 2) = dphi(1);
    Vec X(3);
    X << 0.0, p;
    Vec Xn = X;
    Xn(0) += ng.phi(p);
    const double metric_identity =
        (J.transpose() * after.assembled.eval(Xn) * J - before.assembled.eval(X)).cwiseAbs().maxCoeff();
    Record r;
    r.inputs = {{"theta", p(0)}, {"n", p(1)}};
    r.outputs = {{"phi", ng.phi(p)}, {"omega_n_before", omega(p)(1)}, {"omega_n_after", w(1)}};
    r.residuals = {{"normal_component", std::abs(w(1))},
                   {"time_shift_identity", metric_identity},
                   {"phi_at_boundary", p(1) == 0.0 ? std::abs(ng.phi(p)) : 0.0}};
    r.residual = std::abs(w(1));
    return r;
  });
  rep.tolerance = tolerance_or(s, 1e-8);
  rep.checks.push_back({"time_shift_identity", max_over(rep.records, "time_shift_identity"), 1e-8});
  rep.checks.push_back({"phi_at_boundary", max_over(rep.records, "phi_at_boundary"), 1e-14});
  rep.notes["time_shift"] = "t' = t + phi realizes omega' = omega - d phi";
}

struct Command {
  const char* name;
  ScenarioKind default_kind;
  void (*run)(const Scenario&, const RunConfig&, ExperimentReport&);
};

const std::vector<Command>& commands() {
  static const std::vector<Command> list{
      {"scatter", ScenarioKind::minkowski_slab, exp_scatter},
      {"connect", ScenarioKind::product_disk, exp_connect},
      {"defining-r-sweep", ScenarioKind::product_disk, exp_sweep},
      {"michel", ScenarioKind::product_disk, exp_michel},
      {"verify-thm1", ScenarioKind::product_disk, exp_thm1},
      {"kernel-tests", ScenarioKind::perturbed_product, exp_kernel},
      {"verify-thmmag", ScenarioKind::stationary_rot, exp_thmmag},
      {"magnetic-michel", ScenarioKind::stationary_rot, exp_mag_michel},
      {"lin-equivalence", ScenarioKind::stationary_rot, exp_lin_equiv},
      {"gauge-invariance", ScenarioKind::stationary_rot, exp_gauge},
      {"conformal-reparam", ScenarioKind::product_disk, exp_reparam},
      {"normal-coords", ScenarioKind::stationary_rot, exp_normal},
  };
  return list;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& c : commands()) out.emplace_back(c.name);
    return out;
  }();
  return names;
}

ExperimentReport run_experiment(const std::string& command, const RunConfig& cfg) {
  for (const auto& c : commands()) {
    if (command != c.name) continue;
    const ScenarioDescriptor d = cfg.scenario.value_or(default_descriptor(c.default_kind));
    const Scenario s = build_scenario(d);
    ExperimentReport rep;
    rep.experiment = command;
    rep.scenario = s.desc.name;
    rep.seed = cfg.seed;
    const auto start = Clock::now();
    c.run(s, cfg, rep);
    rep.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
    rep.finalize();
    return rep;
  }
  throw ConfigError("unknown command '" + command + "'");
}

}  // namespace scatlab
