#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "mtdbench/graph_analysis.hpp"
#include "mtdbench/harm.hpp"
#include "mtdbench/rng.hpp"
#include "mtdbench/scenario.hpp"
#include "mtdbench/security_metrics.hpp"
#include "support/oracles.hpp"

using namespace mtdbench;

TEST_CASE("ehealth scenario content pins the published tables") {
  const ScenarioDescription sc = ehealth_scenario();
  REQUIRE(sc.vms.size() == 10);
  CHECK(sc.vms[0].asset_value == 500.0);
  CHECK(sc.vms[5].asset_value == 480.0);
  CHECK(sc.vms[9].asset_value == 10000.0);
  CHECK(sc.vms[9].os_name == "linux");
  CHECK(sc.edges.size() == 18);
  CHECK(sc.target_id == 10);

  REQUIRE(sc.backups.size() == 7);
  const BackupOs& six = sc.backups[5];
  CHECK(six.name == "OpenBSD");
  CHECK(six.cost_of_security == 150.0);
  CHECK(six.exposure_factor == 0.45);
  CHECK(six.asset_value == 680.0);

  // vm10 carries the full three-leaf linux tree so per-path risk sums work
  // out; see the analysis tests.
  const Harm harm = build_harm(sc);
  CHECK(harm.tree(10).leaves.size() == 3);
  CHECK(count_paths_dag(harm).at(10) == 22);
}

TEST_CASE("scenario json round-trip preserves the built harm") {
  const ScenarioDescription sc = ehealth_scenario();
  const std::string text = scenario_to_json(sc);
  const ScenarioDescription back = scenario_from_json(text);

  CHECK(back.name == sc.name);
  CHECK(back.vms.size() == sc.vms.size());
  CHECK(back.edges == sc.edges);
  CHECK(back.target_id == sc.target_id);
  CHECK(back.backups.size() == sc.backups.size());

  const Harm a = build_harm(sc);
  const Harm b = build_harm(back);
  CHECK(a.edges == b.edges);
  CHECK(a.vms.size() == b.vms.size());
  for (NodeId id : a.vm_ids()) {
    CHECK(a.vm(id).asset_value == b.vm(id).asset_value);
    CHECK(a.tree(id).leaves.size() == b.tree(id).leaves.size());
    for (std::size_t i = 0; i < a.tree(id).leaves.size(); ++i) {
      CHECK(a.tree(id).leaves[i].cve_id == b.tree(id).leaves[i].cve_id);
      CHECK(a.tree(id).leaves[i].impact == b.tree(id).leaves[i].impact);
      CHECK(a.tree(id).leaves[i].exposure_factor ==
            b.tree(id).leaves[i].exposure_factor);
    }
  }
  // serialize(deserialize(text)) is stable
  CHECK(scenario_to_json(back) == text);
}

TEST_CASE("random scenarios round-trip") {
  Xoshiro256 rng(20240811);
  for (int trial = 0; trial < 25; ++trial) {
    const ScenarioDescription sc = testsupport::random_acyclic_scenario(rng, 9);
    const ScenarioDescription back = scenario_from_json(scenario_to_json(sc));
    CHECK(scenario_to_json(back) == scenario_to_json(sc));
  }
}

TEST_CASE("scenario schema is strict") {
  SUBCASE("unknown top-level field") {
    CHECK_THROWS_AS(scenario_from_json(R"({"vms":[],"edges":[],"attacker":"A",
      "target":1,"os_catalog":{},"backups":[],"bogus":1})"),
                    ModelError);
  }
  SUBCASE("unknown vm field") {
    CHECK_THROWS_AS(scenario_from_json(R"({"vms":[{"id":1,"os":"x",
      "asset_value":1,"color":"red"}],"edges":[],"attacker":"A","target":1,
      "os_catalog":{"x":[]},"backups":[]})"),
                    ModelError);
  }
  SUBCASE("missing required field") {
    CHECK_THROWS_AS(scenario_from_json(R"({"vms":[],"edges":[],"attacker":"A",
      "target":1,"backups":[]})"),
                    ModelError);
  }
  SUBCASE("os missing from catalog") {
    CHECK_THROWS_AS(scenario_from_json(R"({"vms":[{"id":1,"os":"gone",
      "asset_value":1}],"edges":[],"attacker":"A","target":1,
      "os_catalog":{},"backups":[]})"),
                    ModelError);
  }
  SUBCASE("not json at all") {
    CHECK_THROWS_AS(scenario_from_json("not json"), ModelError);
  }
}

TEST_CASE("shipped ehealth fixture matches the built-in scenario") {
  const std::filesystem::path fixture =
      std::filesystem::path(MTDBENCH_SOURCE_DIR) / "scenarios" / "ehealth.json";
  REQUIRE(std::filesystem::exists(fixture));
  const ScenarioDescription fromDisk = load_scenario(fixture);
  CHECK(scenario_to_json(fromDisk) == scenario_to_json(ehealth_scenario()));
}

TEST_CASE("cloudband generator") {
  SUBCASE("desk-scale instance validates") {
    const ScenarioDescription sc = cloudband_generator(75, 2, 3, 7);
    CHECK(sc.vms.size() == 152);  // 150 band VMs + resource + database
    const Harm harm = build_harm(sc);
    CHECK(validate(harm).empty());
  }

  SUBCASE("degree 1 gives one chain per entry VM") {
    const ScenarioDescription sc = cloudband_generator(4, 2, 1, 3);
    const Harm harm = build_harm(sc);
    CHECK(count_paths_dag(harm).at(sc.target_id) == 4);
  }

  SUBCASE("same seed, same bytes") {
    CHECK(scenario_to_json(cloudband_generator(10, 2, 3, 42)) ==
          scenario_to_json(cloudband_generator(10, 2, 3, 42)));
  }

  SUBCASE("different seeds differ") {
    CHECK(scenario_to_json(cloudband_generator(10, 2, 3, 1)) !=
          scenario_to_json(cloudband_generator(10, 2, 3, 2)));
  }

  SUBCASE("every VM lies on some attacker->target path") {
    const ScenarioDescription sc = cloudband_generator(6, 3, 2, 9);
    const Harm harm = build_harm(sc);
    const auto occurrence = count_paths_dag(harm);
    for (NodeId id : harm.vm_ids()) CHECK(occurrence.at(id) > 0);
  }

  SUBCASE("degree larger than band size is rejected") {
    CHECK_THROWS_AS(cloudband_generator(3, 2, 5, 0), ModelError);
  }

  SUBCASE("security totals grow with the band size at fixed degree") {
    // needs sizes where path growth dominates the seeded edge noise
    for (std::uint64_t seed : {13u, 7u, 99u}) {
      double prev_risk = 0.0, prev_ac = 0.0, prev_roa = 0.0;
      for (int n : {10, 20, 30, 40}) {
        const Harm harm = build_harm(cloudband_generator(n, 2, 3, seed));
        const SecurityReport report =
            security_report(harm, enumerate_attack_paths(harm));
        CHECK(report.risk_total >= prev_risk);
        CHECK(report.attack_cost_total >= prev_ac);
        CHECK(report.roa_total >= prev_roa);
        prev_risk = report.risk_total;
        prev_ac = report.attack_cost_total;
        prev_roa = report.roa_total;
      }
    }
  }
}
