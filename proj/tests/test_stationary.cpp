#include "scatlab/scenarios.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace scatlab;

namespace {

MetricField euclid2() {
  MetricField h;
  h.dim = 2;
  h.eval = [](const Vec&) { return Mat(Mat::Identity(2, 2)); };
  return h;
}

CovectorField rotation_form(double b) {
  CovectorField w;
  w.dim = 2;
  w.eval = [b](const Vec& x) { return (Vec(2) << -0.5 * b * x(1), 0.5 * b * x(0)).finished(); };
  return w;
}

// Nonuniform field: omega = (-y (1 + x) / 2, x / 2) * b.
CovectorField lumpy_form(double b) {
  CovectorField w;
  w.dim = 2;
  w.eval = [b](const Vec& x) {
    return (Vec(2) << -0.5 * b * x(1) * (1.0 + 0.5 * x(0)), 0.5 * b * x(0) + 0.1 * x(1) * x(1)).finished();
  };
  return w;
}

}  // namespace

TEST(Stationary, RawRoundTripOnHundredPoints) {
  ScalarField lam;
  lam.eval = [](const Vec& x) { return 1.0 + 0.3 * std::exp(-x.squaredNorm()); };
  CovectorField wr;
  wr.dim = 2;
  wr.eval = [](const Vec& x) { return (Vec(2) << 0.2 * x(1), -0.1 * x(0) + 0.05).finished(); };
  MetricField hr;
  hr.dim = 2;
  hr.eval = [](const Vec& x) {
    Mat m(2, 2);
    m << 1.0 + 0.1 * x(0) * x(0), 0.05, 0.05, 1.2;
    return m;
  };
  const StationaryMetric m = from_raw(lam, wr, hr);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Vec x = (Vec(2) << u(rng), u(rng)).finished();
    const Vec X = (Vec(3) << u(rng), x).finished();
    EXPECT_LT((m.assembled.eval(X) - raw_matrix(lam, wr, hr, x)).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Stationary, RawRejectsIndefiniteBase) {
  MetricField hr;
  hr.dim = 2;
  hr.eval = [](const Vec&) {
    Mat m(2, 2);
    m << 1.0, 0.0, 0.0, -0.5;
    return m;
  };
  try {
    from_raw(constant_scalar(1.0), zero_covector(2), hr).base.eval(Vec::Zero(2));
    FAIL() << "indefinite base accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_positive_definite);
  }
}

TEST(Stationary, TimeInvariantConservedAlongGeodesics) {
  const Scenario s = make_scenario(ScenarioKind::custom);
  const Vec X = (Vec(3) << 0.0, 0.2, -0.1).finished();
  const Vec V = (Vec(3) << 1.3, 0.4, 0.7).finished();
  const GeodesicPath p = integrate_geodesic(s.g(), X, V, StopAtSigma{1.0});
  // lambda * (v_t + <omega, v_x>) is the Killing constant -(d_t, v)_g.
  auto killing = [&](const PathSample& q) { return -inner(s.g(), q.x, unit(3, 0), q.v); };
  const double k0 = killing(p.front());
  EXPECT_NEAR(k0, s.metric.lambda(Vec(X.tail(2))) * time_invariant(s.metric, X, V), 1e-12);
  for (const auto& q : p.samples) EXPECT_NEAR(killing(q), k0, 1e-10);
}

TEST(Stationary, ConstantFieldArcClosedForm) {
  // B = 0.2 bends unit-speed paths on circles of radius 5; x, y 2 apart.
  const StationaryMetric m = make_stationary(constant_scalar(1.0), rotation_form(0.2), euclid2());
  const MagneticSystem mag = magnetic_system(m);
  const double radius = 5.0, phi = 2.0 * std::asin(0.2);
  const Vec x = (Vec(2) << -1.0, 0.0).finished(), y = (Vec(2) << 1.0, 0.0).finished();
  const MagneticConnector c = magnetic_connector(mag, x, y);
  EXPECT_NEAR(c.length, radius * phi, 1e-9);
  EXPECT_NEAR(std::abs(c.flux), 0.2 * radius * radius / 2.0 * (phi - std::sin(phi)), 1e-9);
  EXPECT_NEAR(c.action, radius / 2.0 * (phi + std::sin(phi)), 1e-9);
  EXPECT_NEAR(action_A(mag, x, y), c.action, 1e-9);
}

TEST(Stationary, ActionUnderOrientationReversal) {
  // Reversing a magnetic path flips the force: A_omega(x, y) = A_{-omega}(y, x).
  const CovectorField w = lumpy_form(0.4);
  CovectorField minus;
  minus.dim = 2;
  minus.eval = [w](const Vec& x) { return Vec(-w(x)); };
  const MagneticSystem plus_sys = magnetic_system(make_stationary(constant_scalar(1.0), w, euclid2()));
  const MagneticSystem minus_sys = magnetic_system(make_stationary(constant_scalar(1.0), minus, euclid2()));
  const Vec x = (Vec(2) << -0.8, 0.3).finished(), y = (Vec(2) << 0.7, -0.4).finished();
  const double forward = action_A(plus_sys, x, y);
  EXPECT_NEAR(action_A(minus_sys, y, x), forward, 1e-9);
  // Not symmetric for this field, so the check above is not vacuous.
  EXPECT_GT(std::abs(action_A(plus_sys, y, x) - forward), 1e-4);
}

TEST(Stationary, LorentzForceIsSkewAndSpeedPreserving) {
  const Scenario s = make_scenario(ScenarioKind::stationary_rot);
  const MagneticSystem mag = magnetic_system(s.metric);
  const Vec x = (Vec(2) << 0.3, -0.2).finished(), u = (Vec(2) << 0.6, 0.8).finished();
  EXPECT_NEAR(u.dot(mag.lorentz_force(x, u)), 0.0, 1e-10);
  // Two-form of (B/2)(-y, x) is B dx ^ dy.
  EXPECT_NEAR(mag.two_form(x)(0, 1) - mag.two_form(x)(1, 0), 2.0 * 0.2, 1e-8);
  const GeodesicPath p = magnetic_integrate(mag, x, u, StopAtSigma{0.8});
  for (const auto& q : p.samples) EXPECT_NEAR(q.v.norm(), 1.0, 1e-12);
}

TEST(Stationary, ProjectionOfNullGeodesicSolvesMagneticEquation) {
  const Scenario s = make_scenario(ScenarioKind::stationary_rot);
  const auto ray = ray_grid(s, 3)[1];
  const ThmMagResiduals t = thmmag_verify(s.metric, *s.base_boundary, ray.x, ray.v_proj);
  EXPECT_LT(t.exit, 1e-6);
  EXPECT_LT(t.length, 1e-6);
  EXPECT_LT(t.action, 1e-6);
  EXPECT_LT(t.round_trip, 1e-5);
}

TEST(Stationary, ConformalNormalizationKeepsNullDirections) {
  const Scenario s = make_scenario(ScenarioKind::custom);
  const StationaryMetric n = conformal_normalize(s.metric);
  const Vec x = (Vec(2) << 0.3, 0.1).finished();
  EXPECT_NEAR(n.lambda(x), 1.0, 1e-15);
  const Vec X = (Vec(3) << 0.0, x).finished();
  EXPECT_LT((s.g().eval(X) / s.metric.lambda(x) - n.assembled.eval(X)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Stationary, NormalGaugeKillsNormalComponent) {
  // omega = (x^2 + 1, sin x^1) on coordinates (s, n) with n the normal index.
  CovectorField w;
  w.dim = 2;
  w.eval = [](const Vec& p) { return (Vec(2) << p(1) * p(1) + 1.0, std::sin(p(0)) + p(1)).finished(); };
  const NormalGauge g = boundary_normal_coords(w, 1);
  for (double s : {0.0, 0.7, 2.0}) {
    for (double n : {0.0, 0.1, 0.3}) {
      const Vec p = (Vec(2) << s, n).finished();
      EXPECT_LT(std::abs(g.transformed(p)(1)), 1e-8);
      // phi(s, n) = int_0^n omega_n = n sin s + n^2 / 2.
      EXPECT_NEAR(g.phi(p), n * std::sin(s) + 0.5 * n * n, 1e-12);
    }
  }
}
