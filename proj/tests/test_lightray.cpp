#include "scatlab/experiments.hpp"
#include "scatlab/lightray.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace scatlab;

TEST(LightRay, SimpsonExactOnCubics) {
  for (int n : {4, 5, 7}) {  // even and odd interval counts
    const double h = 2.0 / n;
    std::vector<double> v;
    for (int i = 0; i <= n; ++i) {
      const double x = i * h;
      v.push_back(x * x * x - 2.0 * x + 1.0);
    }
    EXPECT_NEAR(simpson(v, h), 4.0 - 4.0 + 2.0, 1e-13) << n;
  }
}

TEST(LightRay, AffinePotentialInFlatSpaceIsSymmetricPart) {
  const Scenario s = make_scenario(ScenarioKind::minkowski_slab);
  Mat b(3, 3);
  b << 0.1, 0.7, -0.2, 0.3, 0.0, 0.5, 1.1, -0.4, 0.2;
  const Vec a = (Vec(3) << 0.5, -1.0, 0.25).finished();
  const SymTwoTensorField f = sym_diff(affine_covector(a, b), s.g());
  const Mat expect = 0.5 * (b + b.transpose());
  EXPECT_LT((f((Vec(3) << 0.3, 0.1, -0.7).finished()) - expect).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LightRay, EndpointIdentityForNonVanishingPotential) {
  const Scenario s = make_scenario(ScenarioKind::perturbed_product);
  Mat b(3, 3);
  b << 0.2, -0.1, 0.4, 0.0, 0.3, 0.1, -0.5, 0.2, 0.1;
  const CovectorField v = affine_covector((Vec(3) << 1.0, 0.2, -0.3).finished(), b);
  const SymTwoTensorField f = sym_diff(v, s.g());
  for (const auto& ray : ray_grid(s, 4)) {
    const auto path = trace_ray(s.g(), s.entry, s.exit, ray.x, ray.v_proj).second;
    const double ends = endpoint_pairing_difference(v, path);
    EXPECT_GT(std::abs(ends), 1e-3);
    EXPECT_NEAR(light_ray_transform(f, path), ends, 1e-8);
  }
}

TEST(LightRay, ConformalMultipleInKernel) {
  const Scenario s = make_scenario(ScenarioKind::stationary_rot);
  ScalarField c;
  c.eval = [](const Vec& x) { return 2.0 + std::sin(x(1)) * x(0); };
  std::vector<GeodesicPath> paths;
  for (const auto& ray : ray_grid(s, 5)) {
    paths.push_back(trace_ray(s.g(), s.entry, s.exit, ray.x, ray.v_proj).second);
  }
  EXPECT_LT(kernel_conformal_test(c, s.g(), paths), 1e-12);
}

TEST(LightRay, InteriorPotentialInKernel) {
  const Scenario s = make_scenario(ScenarioKind::stationary_rot);
  const CovectorField v = interior_potential(s);
  std::vector<GeodesicPath> paths;
  for (const auto& ray : ray_grid(s, 6)) {
    paths.push_back(trace_ray(s.g(), s.entry, s.exit, ray.x, ray.v_proj).second);
  }
  EXPECT_LT(kernel_potential_test(v, s.g(), paths), 1e-8);
}

TEST(LightRay, PreconditionsEnforced) {
  const Scenario s = make_scenario(ScenarioKind::minkowski_slab);
  const GeodesicPath timelike = integrate_geodesic(s.g(), Vec::Zero(3),
                                                   (Vec(3) << 1.0, 0.5, 0.0).finished(), StopAtSigma{1.0});
  EXPECT_THROW(light_ray_transform(metric_as_tensor(s.g()), timelike), Error);
  // ray_transform has no lightlike requirement: int <g, v v> = (v, v) * length.
  GeodesicPath p = timelike;
  EXPECT_NEAR(ray_transform(metric_as_tensor(s.g()), p), -0.75, 1e-12);
  // Endpoint values of a non-vanishing covector are rejected by the kernel test.
  const CovectorField v = affine_covector((Vec(3) << 1.0, 0.0, 0.0).finished(), Mat::Zero(3, 3));
  const auto ray = trace_ray(s.g(), s.entry, s.exit, Vec::Zero(3), (Vec(3) << 1.0, 0.0, 0.0).finished());
  EXPECT_THROW(kernel_potential_test(v, s.g(), {ray.second}), Error);
}

TEST(LightRay, MagneticTransformNeedsUnitSpeed) {
  MetricField h;
  h.dim = 2;
  h.eval = [](const Vec&) { return Mat(Mat::Identity(2, 2)); };
  GeodesicPath p = integrate_geodesic(h, Vec::Zero(2), (Vec(2) << 2.0, 0.0).finished(), StopAtSigma{1.0});
  const SymTwoTensorField f{2, [](const Vec&) { return Mat(Mat::Identity(2, 2)); }};
  EXPECT_THROW(magnetic_linearized_transform(f, zero_covector(2), h, p), Error);
  p = integrate_geodesic(h, Vec::Zero(2), (Vec(2) << 0.6, 0.8).finished(), StopAtSigma{2.0});
  const CovectorField beta = affine_covector((Vec(2) << 1.0, 0.0).finished(), Mat::Zero(2, 2));
  // |x'|^2 * 2 + int beta(x') = 2 + 0.6 * 2.
  EXPECT_NEAR(magnetic_linearized_transform(f, beta, h, p), 3.2, 1e-12);
}
