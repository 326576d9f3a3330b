#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mtdbench/harm.hpp"

namespace mtdbench {

// On-disk description of a deployment: VM inventory, connectivity, the OS
// vulnerability catalog and the diversity backup catalog. This is the only
// input format; see from_json/to_json for the exact schema.
struct ScenarioDescription {
  std::string name;
  std::string description;
  std::vector<VmNode> vms;                    // os_name refers into os_catalog
  std::vector<std::pair<NodeId, NodeId>> edges;
  NodeId target_id = 0;
  std::map<std::string, std::vector<Vulnerability>> os_catalog;
  std::vector<BackupOs> backups;
};

// Strict JSON (de)serialization. Unknown fields are rejected, required
// fields must be present, "aro" and "threat" may be omitted. The attacker
// appears as the string "A" (in the "attacker" field and in edge slots);
// VM ids are integers >= 1.
ScenarioDescription scenario_from_json(const std::string& text);
std::string scenario_to_json(const ScenarioDescription& scenario);

ScenarioDescription load_scenario(const std::filesystem::path& path);
void save_scenario(const ScenarioDescription& scenario,
                   const std::filesystem::path& path);

// The built-in 10-VM e-health cloud: vm1-vm5 Windows 10 (asset value 500),
// vm6-vm9 Linux (480), vm10 the Linux database VM (10000) and the target.
// 18 upper-layer edges, a 7-entry backup catalog, plus fedora in the OS
// catalog as the single-backup diversity variant.
ScenarioDescription ehealth_scenario();

// Diversity variant assembled from a scenario's OS catalog (tree = catalog
// entry for `os_name`). Asset value must be supplied by the caller since the
// catalog stores per-OS vulnerabilities only; cost defaults to the flat
// per-operation diversity rate.
BackupOs make_variant_from_catalog(const ScenarioDescription& scenario,
                                   const std::string& os_name,
                                   double asset_value,
                                   double cost_of_security = 55.0);

// Layered topology generator: attacker -> band 1 -> ... -> band `bands` ->
// resource node -> database target. Every VM carries one deterministic
// forward edge (position p feeds position p of the next layer), plus up to
// degree-1 seeded extra edges toward later VMs in its own band or the next
// layer, so out-degree never exceeds `degree`, the graph stays acyclic and
// every VM lies on at least one attacker->target path. Bands alternate
// win10/linux profiles.
ScenarioDescription cloudband_generator(int n_per_band, int bands, int degree,
                                        std::uint64_t seed);

}  // namespace mtdbench
