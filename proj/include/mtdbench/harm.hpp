#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mtdbench/errors.hpp"

namespace mtdbench {

// Node ids in the upper layer. VMs use ids >= 1; the attacker is the single
// reserved node 0 (spelled "A" in scenario files).
using NodeId = int;
inline constexpr NodeId kAttackerId = 0;

// One CVE-derived leaf of an attack tree. Scores are stored as ingested:
// impact on the 0-10 CVSS subscore scale, exploitability and exposure_factor
// already normalized to [0,1].
struct Vulnerability {
  std::string id;            // short symbol, e.g. "v1,W"
  std::string cve_id;
  double impact = 0.0;
  double exploitability = 0.0;
  double base_score = 0.0;
  double attack_cost = 0.0;  // abstract cost units, > 0
  double exposure_factor = 0.0;
  std::string threat;        // free-text label
};

enum class Gate { kOr, kAnd };

// Lower-layer attack tree of a VM: a single gate over vulnerability leaves.
// AND trees are representable but metric evaluation is defined for OR only.
struct AttackTree {
  NodeId root = 0;  // owning VM id
  Gate gate = Gate::kOr;
  std::vector<Vulnerability> leaves;
};

struct VmNode {
  NodeId id = 0;
  std::string os_name;
  double asset_value = 0.0;
  double aro = 1.0;  // annualized rate of occurrence
};

// A diversity candidate: either a bare (EF, AV, CS) catalog entry or a full
// variant with its own vulnerability list (the single-backup case).
struct BackupOs {
  int index = 0;  // 1-based catalog position
  std::string name;
  double exposure_factor = 0.0;
  double cost_of_security = 0.0;
  double asset_value = 0.0;
  int vuln_count = 0;
  std::optional<std::vector<Vulnerability>> vulnerabilities;
};

// Two-layer model: a directed connectivity graph over {attacker} + VMs and
// one attack tree per VM. Construct through build_harm() or the transform
// functions; treat instances as immutable afterwards (all analyses take
// const references and transforms return fresh copies), which makes a Harm
// safe to share across threads.
struct Harm {
  std::map<NodeId, VmNode> vms;
  std::map<NodeId, AttackTree> trees;
  std::set<std::pair<NodeId, NodeId>> edges;
  NodeId attacker_id = kAttackerId;
  NodeId target_id = 0;

  bool has_vm(NodeId id) const { return vms.count(id) > 0; }

  const VmNode& vm(NodeId id) const {
    auto it = vms.find(id);
    if (it == vms.end()) throw ModelError("unknown vm id " + std::to_string(id));
    return it->second;
  }

  const AttackTree& tree(NodeId id) const {
    auto it = trees.find(id);
    if (it == trees.end())
      throw ModelError("vm" + std::to_string(id) + " has no attack tree");
    return it->second;
  }

  // Sorted ascending, so traversals that follow neighbor order are
  // deterministic and lexicographic by node id.
  std::vector<NodeId> out_neighbors(NodeId id) const;
  std::vector<NodeId> in_neighbors(NodeId id) const;
  int in_degree(NodeId id) const;

  std::vector<NodeId> vm_ids() const;
};

struct ScenarioDescription;  // scenario.hpp

// Builds and validates a Harm from a scenario. Throws ModelError on
// duplicate VM ids, edges referencing unknown nodes, missing attack trees
// (an OS absent from the catalog), or a target unreachable from the
// attacker.
Harm build_harm(const ScenarioDescription& scenario);

// Collects invariant violations as data; empty means the model is sound.
// Checks: non-empty VM set, trees total and one-to-one on VMs, edge
// endpoints known, attacker has no in-edges, attacker != target, target is
// a VM reachable from the attacker, per-field ranges (exploitability and
// exposure factors in [0,1], attack cost > 0, asset value and ARO >= 0).
std::vector<std::string> validate(const Harm& harm);

// True when `to` is reachable from `from` along directed edges.
bool reachable(const Harm& harm, NodeId from, NodeId to);

}  // namespace mtdbench
