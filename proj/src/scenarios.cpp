#include "scatlab/scenarios.hpp"

#include <cmath>
#include <numbers>

namespace scatlab {

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::minkowski_slab: return "minkowski_slab";
    case ScenarioKind::product_disk: return "product_disk";
    case ScenarioKind::perturbed_product: return "perturbed_product";
    case ScenarioKind::stationary_rot: return "stationary_rot";
    case ScenarioKind::custom: return "custom";
  }
  return "unknown";
}

std::optional<ScenarioKind> parse_kind(const std::string& name) {
  for (auto k : {ScenarioKind::minkowski_slab, ScenarioKind::product_disk,
                 ScenarioKind::perturbed_product, ScenarioKind::stationary_rot,
                 ScenarioKind::custom}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

ScenarioDescriptor default_descriptor(ScenarioKind kind) {
  ScenarioDescriptor d;
  d.kind = kind;
  d.name = to_string(kind);
  if (kind != ScenarioKind::minkowski_slab) d.parameters["radius"] = 1.0;
  if (kind == ScenarioKind::stationary_rot || kind == ScenarioKind::custom) d.parameters["B"] = 0.2;
  if (kind == ScenarioKind::perturbed_product || kind == ScenarioKind::custom) {
    d.parameters["amplitude"] = 0.1;
  }
  if (kind == ScenarioKind::custom) d.parameters["lambda_amplitude"] = 0.5;
  return d;
}

namespace {

struct Range {
  double lo, hi;
};

const std::map<std::string, Range>& parameter_ranges() {
  static const std::map<std::string, Range> ranges{
      {"radius", {0.2, 10.0}},
      {"B", {-1.0, 1.0}},
      {"amplitude", {-0.5, 0.5}},
      {"lambda_amplitude", {0.0, 2.0}},
  };
  return ranges;
}

}  // namespace

void validate_descriptor(const ScenarioDescriptor& d) {
  const ScenarioDescriptor defaults = default_descriptor(d.kind);
  for (const auto& [key, value] : d.parameters) {
    if (!defaults.parameters.count(key)) {
      throw ScenarioError("parameter '" + key + "' does not apply to " + to_string(d.kind));
    }
    const Range r = parameter_ranges().at(key);
    if (!std::isfinite(value) || value < r.lo || value > r.hi) {
      throw ScenarioError("parameter '" + key + "' outside [" + std::to_string(r.lo) + ", " +
                          std::to_string(r.hi) + "]");
    }
  }
  if (d.grids.rays <= 0 || d.grids.pairs <= 0 || d.grids.sweep_lines <= 0 ||
      d.grids.sweep_points <= 1) {
    throw ScenarioError("grids must be nonempty");
  }
  for (const auto& [key, value] : d.tolerances) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw ScenarioError("tolerance '" + key + "' must be positive");
    }
  }
}

ScalarField bump(double r0, double amplitude, Vec center) {
  ScalarField f;
  f.eval = [r0, amplitude, center](const Vec& x) {
    const Vec d = center.size() ? Vec(x - center) : x;
    const double q = d.squaredNorm() / (r0 * r0);
    return q < 1.0 ? amplitude * std::exp(1.0 - 1.0 / (1.0 - q)) : 0.0;
  };
  f.gradient = [r0, amplitude, center](const Vec& x) {
    const Vec d = center.size() ? Vec(x - center) : x;
    const double q = d.squaredNorm() / (r0 * r0);
    if (q >= 1.0) return Vec(Vec::Zero(x.size()));
    const double b = amplitude * std::exp(1.0 - 1.0 / (1.0 - q));
    return Vec(-b / ((1.0 - q) * (1.0 - q)) * 2.0 * d / (r0 * r0));
  };
  return f;
}

Diffeomorphism twist_map(double eps, double r0) {
  const ScalarField angle = bump(r0, eps);
  auto rot = [](double a) {
    Mat r(2, 2);
    r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    return r;
  };
  Diffeomorphism d;
  d.dim = 2;
  d.map = [angle, rot](const Vec& x) { return Vec(rot(angle(x)) * x); };
  // |psi(x)| = |x|, so the angle is read off the image.
  d.inverse = [angle, rot](const Vec& y) { return Vec(rot(-angle(y)) * y); };
  d.jacobian = [angle, rot](const Vec& x) {
    const double a = angle(x);
    Mat dr(2, 2);
    dr << -std::sin(a), -std::cos(a), std::cos(a), -std::sin(a);
    return Mat(rot(a) + (dr * x) * gradient_of(angle, x).transpose());
  };
  return d;
}

BoundaryHypersurface disk_boundary(double radius) {
  BoundaryHypersurface b;
  b.dim = 2;
  b.causal_type = SurfaceType::timelike;  // Riemannian: normal of positive norm
  b.exterior_sign = 1;
  b.defining = [radius](const Vec& x) { return (x.squaredNorm() - radius * radius) / (2 * radius); };
  b.gradient = [radius](const Vec& x) { return Vec(x / radius); };
  SurfaceChart c;
  c.point = [radius](const Vec& u) {
    Vec x(2);
    x << radius * std::cos(u(0)), radius * std::sin(u(0));
    return x;
  };
  c.tangents = [radius](const Vec& u) {
    Mat e(2, 1);
    e << -radius * std::sin(u(0)), radius * std::cos(u(0));
    return e;
  };
  c.coords = [](const Vec& x) {
    Vec u(1);
    u << std::atan2(x(1), x(0));
    return u;
  };
  b.chart = std::move(c);
  return b;
}

BoundaryHypersurface slab_plane(double position, int exterior_sign) {
  BoundaryHypersurface b;
  b.dim = 3;
  b.causal_type = SurfaceType::timelike;
  b.exterior_sign = exterior_sign;
  b.defining = [position](const Vec& x) { return x(1) - position; };
  b.gradient = [](const Vec&) {
    Vec g(3);
    g << 0.0, 1.0, 0.0;
    return g;
  };
  SurfaceChart c;
  c.point = [position](const Vec& u) {
    Vec x(3);
    x << u(0), position, u(1);
    return x;
  };
  c.tangents = [](const Vec&) {
    Mat e = Mat::Zero(3, 2);
    e(0, 0) = 1.0;
    e(2, 1) = 1.0;
    return e;
  };
  c.coords = [](const Vec& x) {
    Vec u(2);
    u << x(0), x(2);
    return u;
  };
  b.chart = std::move(c);
  return b;
}

namespace {

double param_or(const ScenarioDescriptor& d, const std::string& key, double fallback) {
  auto it = d.parameters.find(key);
  return it == d.parameters.end() ? fallback : it->second;
}

ScalarField gaussian_factor(double amplitude) {
  ScalarField f;
  f.positive = true;
  f.eval = [amplitude](const Vec& x) { return 1.0 + amplitude * std::exp(-x.squaredNorm()); };
  f.gradient = [amplitude](const Vec& x) {
    return Vec(-2.0 * amplitude * std::exp(-x.squaredNorm()) * x);
  };
  return f;
}

CovectorField rotation_form(double field) {
  CovectorField w;
  w.dim = 2;
  w.eval = [field](const Vec& x) {
    Vec o(2);
    o << -0.5 * field * x(1), 0.5 * field * x(0);
    return o;
  };
  w.jacobian = [field](const Vec&) {
    Mat j(2, 2);
    j << 0.0, 0.5 * field, -0.5 * field, 0.0;
    return j;
  };
  return w;
}

MetricField conformal_flat(double amplitude, double domain_radius) {
  MetricField h;
  h.dim = 2;
  h.signature = Signature::riemannian;
  h.eval = [amplitude](const Vec& x) {
    return Mat((1.0 + amplitude * std::exp(-x.squaredNorm())) * Mat::Identity(2, 2));
  };
  h.deriv = [amplitude](const Vec& x) {
    MetricDerivative d;
    const double e = std::exp(-x.squaredNorm());
    for (int k = 0; k < 2; ++k) d.partials[k] = -2.0 * amplitude * x(k) * e * Mat::Identity(2, 2);
    return d;
  };
  if (domain_radius > 0.0) {
    h.domain = [domain_radius](const Vec& x) { return x.norm() < domain_radius; };
  }
  return h;
}

}  // namespace

Scenario build_scenario(const ScenarioDescriptor& d) {
  validate_descriptor(d);
  Scenario s;
  s.desc = d;
  const ScenarioDescriptor defaults = default_descriptor(d.kind);
  for (const auto& [k, v] : defaults.parameters) s.desc.parameters.emplace(k, v);

  if (d.kind == ScenarioKind::minkowski_slab) {
    s.metric = make_stationary(gaussian_factor(0.0), rotation_form(0.0), conformal_flat(0.0, 0.0));
    s.entry = slab_plane(0.0, -1);
    s.exit = slab_plane(1.0, 1);
    return s;
  }
  s.radius = s.param("radius");
  const double amp = param_or(s.desc, "amplitude", 0.0);
  const double field = param_or(s.desc, "B", 0.0);
  const double lam = param_or(s.desc, "lambda_amplitude", 0.0);
  s.metric = make_stationary(gaussian_factor(lam), rotation_form(field),
                             conformal_flat(amp, 1.5 * s.radius));
  s.base_boundary = disk_boundary(s.radius);
  s.entry = cylinder_over(*s.base_boundary);
  s.exit = s.entry;
  return s;
}

Scenario make_scenario(ScenarioKind kind) { return build_scenario(default_descriptor(kind)); }

// ---------------------------------------------------------------------------

namespace {

// Spread of tangential components over [-0.7, 0.7] without repeats.
double spread(int i, double amplitude) { return amplitude * std::sin(2.399963 * i + 0.3); }

}  // namespace

std::vector<EntryRay> ray_grid(const Scenario& s, int count) {
  std::vector<EntryRay> rays;
  rays.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double beta = spread(i, 0.7);
    if (!s.is_disk()) {
      Vec x(3), v(3);
      x << 0.0, 0.0, -0.5 + (i + 0.5) / count;
      v << 1.0, 0.0, beta;
      rays.push_back({x, v});
      continue;
    }
    const double theta = 2.0 * std::numbers::pi * (i + 0.5) / count;
    Vec xb(2), et(2);
    xb << s.radius * std::cos(theta), s.radius * std::sin(theta);
    et << -std::sin(theta), std::cos(theta);
    et /= std::sqrt(inner(s.metric.base, xb, et, et));
    const Vec vx = beta * et;
    Vec x(3), v(3);
    x << 0.0, xb;
    v << 1.0 - s.metric.omega(xb).dot(vx), vx;
    rays.push_back({x, v});
  }
  return rays;
}

std::vector<std::pair<Vec, Vec>> pair_grid(const Scenario& s, int count) {
  std::vector<std::pair<Vec, Vec>> pairs;
  pairs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Vec x(3), y(3);
    if (!s.is_disk()) {
      const double z = -0.5 + (i + 0.5) / count;
      const double dz = spread(i, 0.6);
      x << 0.0, 0.0, z;
      y << std::sqrt(1.0 + dz * dz), 1.0, z + dz;
    } else {
      const double tx = 2.0 * std::numbers::pi * i / count + 0.1;
      const double ty = tx + std::numbers::pi + spread(i, 0.9);
      x << 0.0, s.radius * std::cos(tx), s.radius * std::sin(tx);
      y << 0.0, s.radius * std::cos(ty), s.radius * std::sin(ty);
      y(0) = (Vec(y.tail(2)) - Vec(x.tail(2))).norm();
    }
    pairs.emplace_back(x, y);
  }
  return pairs;
}

std::vector<SigmaPair> sigma_pairs(const Scenario& s, int count, const ConnectOptions& opts) {
  std::vector<SigmaPair> out;
  out.reserve(static_cast<std::size_t>(count));
  for (const auto& [x, y] : pair_grid(s, count)) {
    const double s0 = y(0) - x(0);
    out.push_back(solve_sigma_pair(s.g(), x, y, x(0) + 0.5 * s0, x(0) + 2.0 * s0, Vec(y - x), opts));
  }
  return out;
}

}  // namespace scatlab
