#include "scatlab/scenarios.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace scatlab;

namespace {

GaugePair twist_pair(double eps) {
  return {twist_map(eps, 0.8), bump(0.7, 0.25, (Vec(2) << 0.1, -0.05).finished())};
}

GaugePair shear_pair() {
  // psi(x) = (x + 0.2 b(x), y); phi another bump. Both trivial near |x| = 1.
  const ScalarField b = bump(0.6, 1.0);
  Diffeomorphism psi;
  psi.dim = 2;
  psi.map = [b](const Vec& x) { return (Vec(2) << x(0), x(1) + 0.2 * b(x) * x(0)).finished(); };
  psi.inverse = [b](const Vec& y) {
    // b depends on y(1) through x(1); solve by fixed-point iteration.
    Vec x = y;
    for (int i = 0; i < 200; ++i) x(1) = y(1) - 0.2 * b(x) * x(0);
    return x;
  };
  psi.jacobian = [b](const Vec& x) {
    const Vec db = gradient_of(b, x);
    Mat j(2, 2);
    j << 1.0, 0.0, 0.2 * (db(0) * x(0) + b(x)), 1.0 + 0.2 * db(1) * x(0);
    return j;
  };
  return {psi, bump(0.5, -0.3, (Vec(2) << -0.1, 0.2).finished())};
}

const std::vector<Vec>& probes() {
  static const std::vector<Vec> pts{(Vec(2) << 0.1, 0.2).finished(), (Vec(2) << -0.4, 0.3).finished(),
                                    (Vec(2) << 0.5, -0.5).finished(), (Vec(2) << 0.0, 0.0).finished()};
  return pts;
}

void expect_same_metric(const StationaryMetric& a, const StationaryMetric& b, double tol) {
  for (const Vec& x : probes()) {
    EXPECT_NEAR(a.lambda(x), b.lambda(x), tol);
    EXPECT_LT((a.omega(x) - b.omega(x)).norm(), tol);
    EXPECT_LT((a.base.eval(x) - b.base.eval(x)).cwiseAbs().maxCoeff(), tol);
  }
}

}  // namespace

TEST(Gauge, TwistInverseAndBoundary) {
  const Diffeomorphism t = twist_map(0.5, 0.8);
  for (const Vec& x : probes()) EXPECT_LT((t.inverse(t.map(x)) - x).norm(), 1e-14);
  std::vector<Vec> edge;
  for (int i = 0; i < 8; ++i) edge.push_back((Vec(2) << std::cos(i), std::sin(i)).finished());
  EXPECT_EQ(boundary_defect(twist_pair(0.5), edge), 0.0);
}

TEST(Gauge, IdentityActsTrivially) {
  const StationaryMetric m = make_scenario(ScenarioKind::custom).metric;
  expect_same_metric(apply_gauge(identity_gauge(2), m), m, 1e-14);
}

TEST(Gauge, ActionIsCompatibleWithComposition) {
  const StationaryMetric m = make_scenario(ScenarioKind::custom).metric;
  const GaugePair p1 = twist_pair(0.4), p2 = shear_pair();
  // Acting with p1 and then with p2 equals acting once with p1 * p2.
  expect_same_metric(apply_gauge(p2, apply_gauge(p1, m)), apply_gauge(compose_gauge(p1, p2), m), 1e-8);
}

TEST(Gauge, InverseUndoesAction) {
  const StationaryMetric m = make_scenario(ScenarioKind::custom).metric;
  const GaugePair p = shear_pair();
  expect_same_metric(apply_gauge(inverse_gauge(p), apply_gauge(p, m)), m, 1e-7);
  const GaugePair e = compose_gauge(p, inverse_gauge(p));
  for (const Vec& x : probes()) {
    EXPECT_LT((e.psi.map(x) - x).norm(), 1e-12);
    EXPECT_NEAR(e.phi(x), 0.0, 1e-12);
  }
}

TEST(Gauge, CompositionIsAssociative) {
  const GaugePair a = twist_pair(0.3), b = shear_pair(), c = twist_pair(-0.6);
  const GaugePair l = compose_gauge(compose_gauge(a, b), c);
  const GaugePair r = compose_gauge(a, compose_gauge(b, c));
  for (const Vec& x : probes()) {
    EXPECT_LT((l.psi.map(x) - r.psi.map(x)).norm(), 1e-14);
    EXPECT_NEAR(l.phi(x), r.phi(x), 1e-12);
  }
}

TEST(Gauge, SingularJacobianRejected) {
  Diffeomorphism collapse;
  collapse.dim = 2;
  collapse.map = [](const Vec& x) { return (Vec(2) << x(0), 0.0).finished(); };
  collapse.inverse = collapse.map;
  collapse.jacobian = [](const Vec&) {
    Mat j = Mat::Zero(2, 2);
    j(0, 0) = 1.0;
    return j;
  };
  const StationaryMetric m = make_scenario(ScenarioKind::stationary_rot).metric;
  const StationaryMetric bad = apply_gauge({collapse, constant_scalar(0.0)}, m);
  try {
    bad.base.eval(Vec::Zero(2));
    FAIL() << "singular pullback accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::singular_metric);
  }
}

TEST(Gauge, ScatteringInvariantUnderTwist) {
  const Scenario s = make_scenario(ScenarioKind::stationary_rot);
  const StationaryMetric t = apply_gauge(twist_pair(0.3), s.metric);
  const InvarianceReport r = invariance_check(s.g(), t.assembled, s.entry, s.exit, ray_grid(s, 5));
  EXPECT_LT(r.max_deviation, 1e-6);
}

TEST(Hamiltonian, ConservedAndConstantFactorRescalesTime) {
  const Scenario s = make_scenario(ScenarioKind::perturbed_product);
  const auto ray = ray_grid(s, 1).front();
  const Vec v = lightlike_completion(s.g(), s.entry, ray.x, ray.v_proj, -1);
  const Vec xi = s.g().eval(ray.x) * v;
  for (const auto& st : hamiltonian_flow(s.g(), ray.x, xi, std::nullopt, 1.0)) {
    EXPECT_LT(std::abs(hamiltonian(s.g(), st.x, st.xi)), 1e-10);
  }
  const ReparamReport r = conformal_reparam_check(s.g(), constant_scalar(4.0), ray.x, xi, 1.0);
  EXPECT_NEAR(r.alpha_end, 0.25, 1e-12);
  EXPECT_LT(r.deviation, 1e-9);
  EXPECT_TRUE(r.monotone);
  // Off the zero level set the reduction is refused.
  EXPECT_THROW(hamiltonian_flow(s.g(), ray.x, 2.0 * xi + Vec(unit(3, 1)), constant_scalar(2.0), 1.0), Error);
}
