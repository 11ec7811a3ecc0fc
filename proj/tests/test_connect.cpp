#include "scatlab/experiments.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace scatlab;

TEST(Shooting, SolvesSmoothNonlinearMap) {
  const EndpointMap f = [](const Vec& v) {
    return (Vec(2) << v(0) + 0.1 * v(1) * v(1) * v(1), std::sin(v(1)) + 0.2 * v(0)).finished();
  };
  const Vec target = (Vec(2) << 0.7, 0.4).finished();
  const ShootingResult r = shoot(f, Vec::Zero(2), target);
  EXPECT_LT((f(r.velocity) - target).norm(), 1e-10);
  EXPECT_LE(r.iterations, 10);
}

TEST(Shooting, RankDeficientJacobianIsConjugatePoint) {
  const EndpointMap f = [](const Vec& v) {
    const double s = v(0) + v(1);
    return (Vec(2) << s, s).finished();
  };
  try {
    shoot(f, Vec::Zero(2), (Vec(2) << 1.0, 2.0).finished());
    FAIL() << "singular map accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::conjugate_point);
  }
}

TEST(Shooting, IterationBudget) {
  const EndpointMap f = [](const Vec& v) { return Vec(v.array().exp() - 1.0); };
  ShootingOptions o;
  o.max_iter = 1;
  o.tol = 1e-14;
  try {
    shoot(f, Vec::Zero(1), (Vec(1) << 2.0).finished(), o);
    FAIL() << "one iteration cannot reach 1e-14";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::no_convergence);
  }
}

TEST(Connect, FlatConnectorEnergyClosedForm) {
  const Scenario s = make_scenario(ScenarioKind::product_disk);
  const Vec x = (Vec(3) << 0.0, 1.0, 0.0).finished();
  for (double t : {0.5, 2.0, 3.0}) {
    const Vec y = (Vec(3) << t, -0.6, 0.8).finished();
    const double rho2 = 1.6 * 1.6 + 0.8 * 0.8;
    const ConnectingGeodesic c = connecting_geodesic(s.g(), x, y);
    EXPECT_NEAR(c.energy, 0.5 * (rho2 - t * t), 1e-10);
    EXPECT_LT((c.path.back().x - y).norm(), 1e-10);
    EXPECT_EQ(c.energy < 0.0, c.causal.tag == Causal::timelike);
  }
}

TEST(Connect, CurvedConnectorEnergyIsConstantAlongPath) {
  const Scenario s = make_scenario(ScenarioKind::perturbed_product);
  const Vec x = (Vec(3) << 0.0, 1.0, 0.0).finished();
  const Vec y = (Vec(3) << 1.7, -0.8, 0.5).finished();
  const ConnectingGeodesic c = connecting_geodesic(s.g(), x, y);
  for (const auto& q : c.path.samples) {
    EXPECT_NEAR(0.5 * inner(s.g(), q.x, q.v, q.v), c.energy, 1e-9);
  }
  EXPECT_LT((c.path.back().x - y).norm(), 1e-10);
}

TEST(Connect, SigmaPairTimeIsFlatDistance) {
  const Scenario s = make_scenario(ScenarioKind::product_disk);
  const Vec x = (Vec(3) << 0.0, 1.0, 0.0).finished();
  const Vec y = (Vec(3) << 1.0, -0.6, 0.8).finished();
  const double rho = std::sqrt(1.6 * 1.6 + 0.8 * 0.8);
  const SigmaPair sp = solve_sigma_pair(s.g(), x, y, 0.5 * rho, 2.0 * rho);
  EXPECT_NEAR(sp.y(0), rho, 1e-10);
  EXPECT_TRUE(sigma_detect(s.g(), sp.x, sp.y));
  EXPECT_THROW(solve_sigma_pair(s.g(), x, y, 0.1, 0.2), Error);  // no sign change
}

TEST(Connect, LinearizationMatchesAnalyticDerivative) {
  // r_tau = 1/2 ((1 + tau) rho^2 - dt^2) on the flat product: dr/dtau = rho^2 / 2.
  const Scenario s = make_scenario(ScenarioKind::product_disk);
  const auto pairs = sigma_pairs(s, 3);
  const MetricFamily fam = spatial_scale_family(s);
  for (const auto& sp : pairs) {
    const double rho2 = (Vec(sp.y.tail(2)) - Vec(sp.x.tail(2))).squaredNorm();
    const LinearizationReport lr = linearize_r(fam, sp.x, sp.y, 1e-4);
    EXPECT_NEAR(lr.fd_value, 0.5 * rho2, 1e-8);
    EXPECT_NEAR(lr.kappa * lr.lrt_value, 0.5 * rho2, 1e-8);
  }
}

TEST(Connect, MichelResidualSmallOnProduct) {
  const Scenario s = make_scenario(ScenarioKind::product_disk);
  const auto sp = sigma_pairs(s, 1).front();
  const MichelResidual m = michel_check(s.g(), s.entry, s.exit, sp.x, sp.y);
  EXPECT_LT(m.position, 1e-5);
  EXPECT_LT(m.covector, 1e-5);
  EXPECT_GT(m.scale, 0.0);
}
