#include "scatlab/acceptance.hpp"

#include <gtest/gtest.h>

#include <atomic>

using namespace scatlab;
using nlohmann::json;

TEST(Config, DefaultsMatchDocumentedValues) {
  const RunConfig c = parse_config(json::object());
  EXPECT_FALSE(c.scenario.has_value());
  EXPECT_EQ(c.seed, kDefaultSeed);
  EXPECT_EQ(c.connect.integration.step, 1e-3);
  EXPECT_EQ(c.connect.shooting.tol, 1e-10);
  EXPECT_EQ(c.connect.shooting.max_iter, 50);
  const ScenarioDescriptor d = default_descriptor(ScenarioKind::stationary_rot);
  EXPECT_EQ(d.parameters.at("B"), 0.2);
  EXPECT_EQ(d.grids.rays, 50);
}

TEST(Config, RejectsUnknownKeysAndTypes) {
  EXPECT_THROW(parse_config(json{{"sceanrio", json::object()}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"seed", "abc"}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"integration", {{"step", -1.0}}}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"threads", 0}}), ConfigError);
}

TEST(Config, ScenarioProblemsAreScenarioErrors) {
  EXPECT_THROW(parse_config(json{{"scenario", {{"kind", "wormhole"}}}}), ScenarioError);
  EXPECT_THROW(parse_config(json{{"scenario", {{"kind", "stationary_rot"}, {"parameters", {{"B", 5.0}}}}}}),
               ScenarioError);
  EXPECT_THROW(parse_config(json{{"scenario", {{"kind", "product_disk"}, {"parameters", {{"spin", 1.0}}}}}}),
               ScenarioError);
  EXPECT_THROW(parse_config(json{{"scenario", {{"kind", "product_disk"}, {"grids", {{"rays", 0}}}}}}),
               ScenarioError);
}

TEST(Config, OverridesApply) {
  const RunConfig c = parse_config(json{
      {"scenario", {{"kind", "custom"}, {"parameters", {{"B", 0.3}}}, {"grids", {{"pairs", 4}}}}},
      {"shooting", {{"tol", 1e-9}}},
      {"seed", 5}});
  ASSERT_TRUE(c.scenario);
  EXPECT_EQ(c.scenario->parameters.at("B"), 0.3);
  EXPECT_EQ(c.scenario->parameters.at("lambda_amplitude"), 0.5);  // default kept
  EXPECT_EQ(c.scenario->grids.pairs, 4);
  EXPECT_EQ(c.connect.shooting.tol, 1e-9);
  EXPECT_EQ(c.seed, 5u);
}

TEST(ParallelMap, OrderIndependentOfThreads) {
  auto square = [](std::size_t i) { return static_cast<double>(i * i); };
  EXPECT_EQ(parallel_map(37, 1, square), parallel_map(37, 4, square));
}

TEST(ParallelMap, FailureNamesRecord) {
  std::atomic<int> calls{0};
  try {
    parallel_map(10, 3, [&](std::size_t i) {
      ++calls;
      if (i == 6) throw Error(ErrorKind::no_convergence, "boom");
      return 0;
    });
    FAIL() << "no exception";
  } catch (const RecordFailure& e) {
    EXPECT_EQ(e.index(), 6u);
  }
}

namespace {

json without_timing(json j) {
  j["summary"].erase("wall_time_s");
  return j;
}

}  // namespace

TEST(Report, DeterministicAcrossThreadCounts) {
  RunConfig cfg = parse_config(json{{"scenario", {{"kind", "perturbed_product"}, {"grids", {{"rays", 6}}}}}});
  const ExperimentReport one = run_experiment("kernel-tests", cfg);
  cfg.threads = 3;
  const ExperimentReport three = run_experiment("kernel-tests", cfg);
  EXPECT_EQ(without_timing(to_json(one)).dump(), without_timing(to_json(three)).dump());
  EXPECT_TRUE(one.pass);
}

TEST(Report, SchemaAndCsv) {
  const RunConfig cfg = parse_config(json{{"scenario", {{"kind", "minkowski_slab"}, {"grids", {{"rays", 3}}}}},
                                          {"seed", 99}});
  const ExperimentReport rep = run_experiment("scatter", cfg);
  const json j = to_json(rep);
  EXPECT_EQ(j.at("schema_version"), kSchemaVersion);
  EXPECT_EQ(j.at("seed"), 99);
  EXPECT_EQ(j.at("records").size(), 3u);
  EXPECT_TRUE(j.at("summary").at("pass").get<bool>());
  const std::string csv = to_csv(rep);
  EXPECT_EQ(csv.substr(0, csv.find('\n')).rfind("index,residual", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(Report, PassFollowsTolerance) {
  ExperimentReport rep;
  rep.tolerance = 1e-6;
  rep.records.resize(2);
  rep.records[0].residual = 1e-7;
  rep.records[1].residual = 2e-6;
  rep.finalize();
  EXPECT_FALSE(rep.pass);
  EXPECT_DOUBLE_EQ(rep.max_residual, 2e-6);
  rep.records[1].residual = 5e-7;
  rep.finalize();
  EXPECT_TRUE(rep.pass);
  rep.checks.push_back({"extra", 2.0, 1.0});
  rep.finalize();
  EXPECT_FALSE(rep.pass);
}

TEST(Experiments, MagneticCommandsNeedDisk) {
  const RunConfig cfg = parse_config(json{{"scenario", {{"kind", "minkowski_slab"}}}});
  EXPECT_THROW(run_experiment("verify-thmmag", cfg), ScenarioError);
  EXPECT_THROW(run_experiment("teleport", cfg), ConfigError);
}

TEST(Experiments, GaugeFamiliesHaveVanishingFirstVariation) {
  const Scenario s = make_scenario(ScenarioKind::product_disk);
  const auto sp = sigma_pairs(s, 1).front();
  for (const MetricFamily& fam : {conformal_family(s), potential_family(s)}) {
    const LinearizationReport lr = linearize_r(fam, sp.x, sp.y, 1e-4);
    EXPECT_LT(std::abs(lr.fd_value), 1e-6);
    EXPECT_LT(std::abs(lr.lrt_value), 1e-6);
  }
}

TEST(Acceptance, CriterionBookkeeping) {
  CriterionResult r;
  EXPECT_FALSE(r.pass());  // nothing checked is not a pass
  r.parts.push_back({"a", 1e-9, 1e-8});
  r.parts.push_back({"count", 20.0, 20.0, false});
  EXPECT_TRUE(r.pass());
  r.parts.push_back({"b", 5e-8, 1e-8});
  EXPECT_FALSE(r.pass());
  EXPECT_EQ(r.worst()->name, "b");
  EXPECT_EQ(format_line(r).rfind("FAIL", 0), 0u);
}

TEST(Acceptance, ObservedOrders) {
  EXPECT_GE(rk4_endpoint_order().observed, 3.7);
}
