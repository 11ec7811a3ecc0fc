#include "scatlab/gauge.hpp"

#include <cmath>

namespace scatlab {

Diffeomorphism identity_map(int dim) {
  return {dim, [](const Vec& x) { return x; }, [](const Vec& x) { return x; },
          [dim](const Vec&) { return Mat(Mat::Identity(dim, dim)); }};
}

GaugePair identity_gauge(int dim) {
  ScalarField zero = constant_scalar(0.0);
  return {identity_map(dim), zero};
}

GaugePair compose_gauge(const GaugePair& p1, const GaugePair& p2) {
  const Diffeomorphism a = p1.psi, b = p2.psi;
  Diffeomorphism psi;
  psi.dim = a.dim;
  psi.map = [a, b](const Vec& x) { return a.map(b.map(x)); };
  psi.inverse = [a, b](const Vec& x) { return b.inverse(a.inverse(x)); };
  psi.jacobian = [a, b](const Vec& x) { return Mat(a.jacobian(b.map(x)) * b.jacobian(x)); };
  ScalarField phi;
  phi.eval = [f1 = p1.phi, f2 = p2.phi, a](const Vec& x) { return f1(x) + f2(a.inverse(x)); };
  return {std::move(psi), std::move(phi)};
}

GaugePair inverse_gauge(const GaugePair& p) {
  const Diffeomorphism a = p.psi;
  Diffeomorphism psi;
  psi.dim = a.dim;
  psi.map = a.inverse;
  psi.inverse = a.map;
  psi.jacobian = [a](const Vec& x) {
    return Mat(a.jacobian(a.inverse(x)).partialPivLu().inverse());
  };
  ScalarField phi;
  phi.eval = [f = p.phi, a](const Vec& x) { return -f(a.map(x)); };
  return {std::move(psi), std::move(phi)};
}

double boundary_defect(const GaugePair& p, const std::vector<Vec>& boundary_points) {
  double worst = 0.0;
  for (const Vec& x : boundary_points) {
    worst = std::max({worst, (p.psi.map(x) - x).norm(), std::abs(p.phi(x))});
  }
  return worst;
}

namespace {

Mat checked_jacobian(const Diffeomorphism& psi, const Vec& x) {
  const Mat j = psi.jacobian(x);
  if (std::abs(j.determinant()) < 1e-12) {
    throw Error(ErrorKind::singular_metric, "gauge diffeomorphism has a singular Jacobian");
  }
  return j;
}

}  // namespace

StationaryMetric apply_gauge(const GaugePair& p, const StationaryMetric& m) {
  const Diffeomorphism psi = p.psi;
  ScalarField lam;
  lam.positive = m.lambda.positive;
  lam.eval = [l = m.lambda, psi](const Vec& x) { return l(psi.map(x)); };

  CovectorField om;
  om.dim = m.omega.dim;
  om.eval = [w = m.omega, phi = p.phi, psi](const Vec& x) {
    const Vec y = psi.map(x);
    return Vec(checked_jacobian(psi, x).transpose() * (w(y) + gradient_of(phi, y)));
  };

  MetricField h;
  h.dim = m.base.dim;
  h.signature = Signature::riemannian;
  h.domain = m.base.domain;
  h.eval = [b = m.base, psi](const Vec& x) {
    const Mat j = checked_jacobian(psi, x);
    return Mat(j.transpose() * b.eval(psi.map(x)) * j);
  };
  return make_stationary(std::move(lam), std::move(om), std::move(h));
}

// ---------------------------------------------------------------------------

double hamiltonian(const MetricField& g, const Vec& x, const Vec& xi,
                   const std::optional<ScalarField>& c) {
  const double base = 0.5 * xi.dot(g.eval(x).partialPivLu().solve(xi));
  return c ? base / (*c)(x) : base;
}

FlowSystem hamiltonian_system(const MetricField& g, const std::optional<ScalarField>& c) {
  FlowSystem sys;
  const int n = g.dim;
  sys.dim = n;
  sys.domain = g.domain;
  sys.rhs = [g, c, n](const State& s) {
    const Vec x = s.head(n);
    const Vec xi = s.segment(n, n);
    const Vec p = g.eval(x).partialPivLu().solve(xi);
    const MetricDerivative dg = metric_derivative(g, x);
    const double cx = c ? (*c)(x) : 1.0;
    const Vec dc = c ? gradient_of(*c, x) : Vec(Vec::Zero(n));
    const double two_h = xi.dot(p);
    State ds(s.size());
    ds.head(n) = p / cx;
    for (int k = 0; k < n; ++k) {
      ds(n + k) = 0.5 * p.dot(dg.partials[k] * p) / cx + 0.5 * dc(k) * two_h / (cx * cx);
    }
    return ds;
  };
  return sys;
}

std::vector<HamiltonianState> hamiltonian_flow(const MetricField& g, const Vec& x0, const Vec& xi0,
                                               const std::optional<ScalarField>& c,
                                               double sigma_max, const IntegrationOptions& opts) {
  if (c && std::abs(hamiltonian(g, x0, xi0)) > 1e-10 * std::max(1.0, xi0.squaredNorm())) {
    throw Error(ErrorKind::precondition, "conformal reduction needs H = 0 initially");
  }
  const GeodesicPath path =
      integrate_flow(hamiltonian_system(g, c), make_state(x0, xi0), StopAtSigma{sigma_max}, opts);
  std::vector<HamiltonianState> out;
  out.reserve(path.samples.size());
  for (const auto& p : path.samples) out.push_back({p.sigma, p.x, p.v});
  return out;
}

namespace {

// Cubic Hermite interpolation of a uniformly sampled flow.
class HermiteTrack {
 public:
  HermiteTrack(const FlowSystem& sys, const std::vector<HamiltonianState>& samples)
      : samples_(samples), n_(sys.dim) {
    h_ = samples.size() > 1 ? samples[1].sigma - samples[0].sigma : 1.0;
    rates_.reserve(samples.size());
    for (const auto& s : samples) rates_.push_back(sys.rhs(make_state(s.x, s.xi)));
  }

  State at(double sigma) const {
    const double last = samples_.back().sigma;
    if (sigma < 0.0 || sigma > last * (1.0 + 1e-12)) {
      throw Error(ErrorKind::precondition, "interpolation outside the sampled range");
    }
    std::size_t i = static_cast<std::size_t>(sigma / h_);
    i = std::min(i, samples_.size() - 2);
    const double t = (sigma - samples_[i].sigma) / h_;
    const double h00 = 2 * t * t * t - 3 * t * t + 1, h10 = t * t * t - 2 * t * t + t;
    const double h01 = -2 * t * t * t + 3 * t * t, h11 = t * t * t - t * t;
    const State a = make_state(samples_[i].x, samples_[i].xi);
    const State b = make_state(samples_[i + 1].x, samples_[i + 1].xi);
    return h00 * a + h10 * h_ * rates_[i] + h01 * b + h11 * h_ * rates_[i + 1];
  }

  int dim() const { return n_; }

 private:
  const std::vector<HamiltonianState>& samples_;
  std::vector<State> rates_;
  double h_ = 1.0;
  int n_ = 0;
};

}  // namespace

ReparamReport conformal_reparam_check(const MetricField& g, const ScalarField& c, const Vec& x0,
                                      const Vec& xi0, double sigma_max,
                                      const IntegrationOptions& opts) {
  const int n = g.dim;
  const auto scaled = hamiltonian_flow(g, x0, xi0, c, sigma_max, opts);
  ReparamReport rep;
  const double h0 = hamiltonian(g, x0, xi0, c);
  for (const auto& s : scaled) {
    rep.h_drift = std::max(rep.h_drift, std::abs(hamiltonian(g, s.x, s.xi, c) - h0));
  }

  // Range of the unscaled parameter needed, from the scaled path itself.
  double estimate = 0.0;
  for (std::size_t i = 1; i < scaled.size(); ++i) {
    const double ds = scaled[i].sigma - scaled[i - 1].sigma;
    estimate += 0.5 * ds * (1.0 / c(scaled[i].x) + 1.0 / c(scaled[i - 1].x));
  }
  const double span = 1.05 * estimate + 10.0 * opts.step;
  const auto plain = hamiltonian_flow(g, x0, xi0, std::nullopt, span, opts);
  const HermiteTrack track(hamiltonian_system(g, std::nullopt), plain);

  auto rate = [&](double alpha) { return 1.0 / c(Vec(track.at(alpha).head(n))); };
  double alpha = 0.0;
  double prev = -1.0;
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    if (i > 0) {
      const double h = scaled[i].sigma - scaled[i - 1].sigma;
      const double k1 = rate(alpha);
      const double k2 = rate(alpha + 0.5 * h * k1);
      const double k3 = rate(alpha + 0.5 * h * k2);
      const double k4 = rate(alpha + h * k3);
      alpha += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    if (!(alpha > prev)) rep.monotone = false;
    prev = alpha;
    const State z = track.at(alpha);
    const double dev = (Vec(z.head(n)) - scaled[i].x).norm() +
                       (Vec(z.segment(n, n)) - scaled[i].xi).norm();
    rep.deviation = std::max(rep.deviation, dev);
  }
  rep.alpha_end = alpha;
  return rep;
}

// ---------------------------------------------------------------------------

InvarianceReport invariance_check(const MetricField& g1, const MetricField& g2,
                                  const BoundaryHypersurface& entry,
                                  const BoundaryHypersurface& exit,
                                  const std::vector<EntryRay>& rays,
                                  const IntegrationOptions& opts) {
  InvarianceReport rep;
  rep.deviations.reserve(rays.size());
  for (const auto& ray : rays) {
    const ScatteringRecord a = scatter(g1, entry, exit, ray.x, ray.v_proj, opts);
    const ScatteringRecord b = scatter(g2, entry, exit, ray.x, ray.v_proj, opts);
    const double scale = a.w_proj.dot(b.w_proj) / b.w_proj.squaredNorm();
    const double dev = (a.y - b.y).norm() + (a.w_proj - scale * b.w_proj).norm();
    rep.deviations.push_back(dev);
    rep.max_deviation = std::max(rep.max_deviation, dev);
  }
  return rep;
}

}  // namespace scatlab
