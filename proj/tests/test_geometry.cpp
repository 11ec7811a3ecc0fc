#include "scatlab/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace scatlab;

namespace {

MetricField minkowski(int dim) {
  MetricField g;
  g.dim = dim;
  g.signature = Signature::lorentzian;
  g.eval = [dim](const Vec&) {
    Mat m = Mat::Identity(dim, dim);
    m(0, 0) = -1.0;
    return m;
  };
  return g;
}

// e^{2u} delta with u = 0.3 x + 0.2 y^2, no analytic derivative.
double conformal_u(const Vec& x) { return 0.3 * x(0) + 0.2 * x(1) * x(1); }
Vec conformal_du(const Vec& x) { return (Vec(2) << 0.3, 0.4 * x(1)).finished(); }

MetricField conformal_plane() {
  MetricField g;
  g.dim = 2;
  g.eval = [](const Vec& x) { return Mat(std::exp(2.0 * conformal_u(x)) * Mat::Identity(2, 2)); };
  return g;
}

// Euclidean plane in polar coordinates (r, theta).
MetricField polar_plane() {
  MetricField g;
  g.dim = 2;
  g.eval = [](const Vec& x) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = x(0) * x(0);
    return m;
  };
  g.domain = [](const Vec& x) { return x(0) > 0.0; };
  return g;
}

Vec cart(const Vec& p) { return (Vec(2) << p(0) * std::cos(p(1)), p(0) * std::sin(p(1))).finished(); }

}  // namespace

TEST(Geometry, MinkowskiChristoffelVanishes) {
  const Christoffel c = christoffel(minkowski(3), (Vec(3) << 0.1, 0.2, 0.3).finished());
  for (int k = 0; k < 3; ++k) EXPECT_LT(c.symbols[k].cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Geometry, ConformallyFlatChristoffelClosedForm) {
  const Vec x = (Vec(2) << 0.4, -0.7).finished();
  const Christoffel c = christoffel(conformal_plane(), x);
  const Vec du = conformal_du(x);
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double exact = (k == i) * du(j) + (k == j) * du(i) - (i == j) * du(k);
        EXPECT_NEAR(c.symbols[k](i, j), exact, 1e-8) << k << i << j;
      }
    }
  }
}

TEST(Geometry, ValidateRejectsWrongSignatureAndSingular) {
  MetricField g = minkowski(3);
  g.signature = Signature::riemannian;
  EXPECT_THROW(validate_metric(g, Vec::Zero(3)), Error);
  MetricField s;
  s.dim = 2;
  s.eval = [](const Vec&) { return Mat(Mat::Zero(2, 2)); };
  try {
    validate_metric(s, Vec::Zero(2));
    FAIL() << "singular metric accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::singular_metric);
  }
}

TEST(Geometry, CausalTrichotomyInMinkowski) {
  const MetricField g = minkowski(3);
  const Vec x = Vec::Zero(3);
  EXPECT_EQ(causal_classify(g, x, (Vec(3) << 1, 0.5, 0).finished()).tag, Causal::timelike);
  EXPECT_EQ(causal_classify(g, x, (Vec(3) << 1, 0.6, 0.8).finished()).tag, Causal::lightlike);
  EXPECT_EQ(causal_classify(g, x, (Vec(3) << 0.2, 1, 0).finished()).tag, Causal::spacelike);
}

TEST(Geometry, PolarGeodesicIsStraightLine) {
  const Vec p0 = (Vec(2) << 1.0, 0.0).finished();
  const Vec v0 = (Vec(2) << 0.0, 1.0).finished();  // unit Cartesian velocity (0, 1)
  const GeodesicPath path = integrate_geodesic(polar_plane(), p0, v0, StopAtSigma{1.5});
  EXPECT_NEAR(path.length(), 1.5, 1e-14);
  const Vec end = cart(path.back().x);
  EXPECT_NEAR(end(0), 1.0, 1e-10);
  EXPECT_NEAR(end(1), 1.5, 1e-10);
  for (const auto& s : path.samples) {
    EXPECT_NEAR(inner(polar_plane(), s.x, s.v, s.v), 1.0, 1e-10);
  }
}

TEST(Geometry, StepHalvingShowsFourthOrder) {
  const Vec p0 = (Vec(2) << 1.0, 0.0).finished();
  const Vec v0 = (Vec(2) << 0.3, 1.2).finished();
  auto err = [&](double h) {
    IntegrationOptions o;
    o.step = h;
    const Vec end = cart(integrate_geodesic(polar_plane(), p0, v0, StopAtSigma{1.0}, o).back().x);
    const Vec exact = (Vec(2) << 1.3, 1.2).finished();
    return (end - exact).norm();
  };
  const double ratio = err(0.05) / err(0.025);
  EXPECT_GT(ratio, 12.0);
  EXPECT_LT(ratio, 20.0);
}

TEST(Geometry, SurfaceStopLandsOnSurface) {
  BoundaryHypersurface plane;
  plane.dim = 3;
  plane.defining = [](const Vec& x) { return x(1) - 0.77; };
  plane.gradient = [](const Vec&) { return Vec(unit(3, 1)); };
  plane.exterior_sign = 1;
  const Vec x0 = Vec::Zero(3);
  const Vec v0 = (Vec(3) << 1.0, 0.6, 0.8).finished();
  const GeodesicPath p = integrate_geodesic(minkowski(3), x0, v0, StopAtSurface{&plane});
  EXPECT_NEAR(p.back().x(1), 0.77, 1e-10);
  EXPECT_NEAR(p.length(), 0.77 / 0.6, 1e-10);
}

TEST(Geometry, ChartExitRaisesTruncation) {
  const Vec p0 = (Vec(2) << 1.0, 0.0).finished();
  const Vec v0 = (Vec(2) << -1.0, 0.0).finished();  // radially inward
  MetricField g = polar_plane();
  g.domain = [](const Vec& x) { return x(0) > 0.5; };
  try {
    integrate_geodesic(g, p0, v0, StopAtSigma{2.0});
    FAIL() << "left the chart silently";
  } catch (const TruncationError& e) {
    EXPECT_GT(e.partial().back().x(0), 0.5);
    EXPECT_LT(e.partial().back().x(0), 0.502);
  }
}

TEST(Geometry, NormalProjectionAndLightlikeCompletion) {
  const MetricField g = minkowski(3);
  BoundaryHypersurface plane;
  plane.dim = 3;
  plane.defining = [](const Vec& x) { return -x(1); };
  plane.gradient = [](const Vec&) { return Vec(-unit(3, 1)); };
  const Vec x = Vec::Zero(3);
  const Vec nu = boundary_normal(plane, g, x);
  EXPECT_NEAR(inner(g, x, nu, nu), 1.0, 1e-14);
  EXPECT_NEAR(nu(1), -1.0, 1e-14);
  const Vec vp = (Vec(3) << 1.0, 0.0, 0.5).finished();
  const Vec v = lightlike_completion(g, plane, x, vp, -1);
  EXPECT_NEAR(inner(g, x, v, v), 0.0, 1e-14);
  EXPECT_GT(v(1), 0.0);  // into x^1 > 0
  EXPECT_LT((boundary_project(g, plane, x, v) - vp).norm(), 1e-14);
  try {
    check_transversal(g, plane, x, (Vec(3) << 1.0, 0.0, 1.0).finished());
    FAIL() << "tangent vector accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::tangency);
  }
}
