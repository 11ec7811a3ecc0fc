#include "scatlab/scenarios.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace scatlab;

TEST(Scattering, SlabRayIsStraight) {
  const Scenario s = make_scenario(ScenarioKind::minkowski_slab);
  const Vec x = Vec::Zero(3);
  const Vec vp = (Vec(3) << 1.0, 0.0, 0.3).finished();
  const ScatteringRecord r = scatter(s.g(), s.entry, s.exit, x, vp);
  const double a = std::sqrt(1.0 - 0.09);
  EXPECT_NEAR(r.travel, 1.0 / a, 1e-10);
  EXPECT_LT((r.y - (Vec(3) << 1.0 / a, 1.0, 0.3 / a).finished()).norm(), 1e-10);
  EXPECT_LT((r.w_proj - vp).norm(), 1e-10);
}

TEST(Scattering, HeadOnSlabRay) {
  const Scenario s = make_scenario(ScenarioKind::minkowski_slab);
  const ScatteringRecord r =
      scatter(s.g(), s.entry, s.exit, Vec::Zero(3), (Vec(3) << 1.0, 0.0, 0.0).finished());
  EXPECT_LT((r.y - (Vec(3) << 1.0, 1.0, 0.0).finished()).norm(), 1e-10);
  EXPECT_NEAR(r.w_full(1), 1.0, 1e-12);
  EXPECT_NEAR(r.travel, 1.0, 1e-10);
}

TEST(Scattering, PositiveHomogeneity) {
  const Scenario s = make_scenario(ScenarioKind::perturbed_product);
  const auto rays = ray_grid(s, 3);
  for (const auto& ray : rays) {
    const ScatteringRecord one = scatter(s.g(), s.entry, s.exit, ray.x, ray.v_proj);
    const ScatteringRecord three = scatter(s.g(), s.entry, s.exit, ray.x, 3.0 * ray.v_proj);
    EXPECT_LT((one.y - three.y).norm(), 1e-9);
    EXPECT_LT((3.0 * one.w_proj - three.w_proj).norm(), 1e-8);
    EXPECT_NEAR(one.travel, 3.0 * three.travel, 1e-9);
  }
}

TEST(Scattering, ExitIsTangentAndOnSurface) {
  const Scenario s = make_scenario(ScenarioKind::stationary_rot);
  for (const auto& ray : ray_grid(s, 4)) {
    const ScatteringRecord r = scatter(s.g(), s.entry, s.exit, ray.x, ray.v_proj);
    const Vec nu = boundary_normal(s.exit, s.g(), r.y);
    EXPECT_LT(std::abs(s.exit.defining(r.y)), 1e-10);
    EXPECT_LT(std::abs(inner(s.g(), r.y, r.w_proj, nu)), 1e-10);
    EXPECT_NEAR(inner(s.g(), r.y, r.w_full, r.w_full), 0.0, 1e-9);
    EXPECT_GT(r.w_full(0), 0.0);
  }
}

TEST(Scattering, NormalizationModes) {
  const Scenario s = make_scenario(ScenarioKind::product_disk);
  const auto ray = ray_grid(s, 1).front();
  const ScatteringRecord r = scatter(s.g(), s.entry, s.exit, ray.x, 2.5 * ray.v_proj);
  const ScatteringRecord t = normalize(s.g(), r, ReducedMode::time_component);
  EXPECT_NEAR(normalization_functional(s.g(), t.x, t.v_proj, ReducedMode::time_component), 1.0, 1e-12);
  const ScatteringRecord u = normalize(s.g(), r, ReducedMode::unit_induced);
  // The entry cylinder is timelike, so unit projected vectors have (v', v') = -1.
  EXPECT_NEAR(inner(s.g(), u.x, u.v_proj, u.v_proj), -1.0, 1e-12);
  // Affine rescaling only: same exit point, travel scales inversely.
  EXPECT_LT((t.y - r.y).norm(), 1e-14);
  EXPECT_NEAR(t.travel * t.v_proj.norm(), r.travel * r.v_proj.norm(), 1e-10);
}

TEST(Scattering, TangentEntryRejected) {
  const Scenario s = make_scenario(ScenarioKind::minkowski_slab);
  // v' spacelike with (v', v') > 0 on a timelike surface has no lightlike lift.
  EXPECT_THROW(scatter(s.g(), s.entry, s.exit, Vec::Zero(3), (Vec(3) << 0.1, 0.0, 1.0).finished()),
               Error);
}

TEST(Scattering, TraceRayPathEndsAtExit) {
  const Scenario s = make_scenario(ScenarioKind::perturbed_product);
  const auto ray = ray_grid(s, 2).back();
  const auto [rec, path] = trace_ray(s.g(), s.entry, s.exit, ray.x, ray.v_proj);
  EXPECT_LT((path.back().x - rec.y).norm(), 1e-9);
  const double h = path.samples[1].sigma - path.samples[0].sigma;
  EXPECT_NEAR(h * (path.samples.size() - 1), rec.travel, 1e-12);
}
