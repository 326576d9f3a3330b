#include "mtdbench/harm.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "mtdbench/scenario.hpp"

namespace mtdbench {

std::vector<NodeId> Harm::out_neighbors(NodeId id) const {
  std::vector<NodeId> out;
  for (const auto& [src, dst] : edges) {
    if (src == id) out.push_back(dst);
  }
  return out;  // edges is an ordered set, so this is already ascending
}

std::vector<NodeId> Harm::in_neighbors(NodeId id) const {
  std::vector<NodeId> in;
  for (const auto& [src, dst] : edges) {
    if (dst == id) in.push_back(src);
  }
  std::sort(in.begin(), in.end());
  return in;
}

int Harm::in_degree(NodeId id) const {
  int deg = 0;
  for (const auto& edge : edges) deg += edge.second == id ? 1 : 0;
  return deg;
}

std::vector<NodeId> Harm::vm_ids() const {
  std::vector<NodeId> ids;
  ids.reserve(vms.size());
  for (const auto& [id, node] : vms) ids.push_back(id);
  return ids;
}

bool reachable(const Harm& harm, NodeId from, NodeId to) {
  if (from == to) return true;
  std::set<NodeId> seen{from};
  std::deque<NodeId> queue{from};
  while (!queue.empty()) {
    const NodeId cur = queue.front();
    queue.pop_front();
    for (NodeId next : harm.out_neighbors(cur)) {
      if (next == to) return true;
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return false;
}

Harm build_harm(const ScenarioDescription& scenario) {
  Harm harm;
  harm.attacker_id = kAttackerId;
  harm.target_id = scenario.target_id;

  for (const VmNode& vm : scenario.vms) {
    if (vm.id <= kAttackerId)
      throw ModelError("vm id must be >= 1, got " + std::to_string(vm.id));
    if (!harm.vms.emplace(vm.id, vm).second)
      throw ModelError("duplicate vm id " + std::to_string(vm.id));
    auto cat = scenario.os_catalog.find(vm.os_name);
    if (cat == scenario.os_catalog.end() || cat->second.empty())
      throw ModelError("vm" + std::to_string(vm.id) + " has no attack tree (os '" +
                       vm.os_name + "' not in catalog)");
    AttackTree tree;
    tree.root = vm.id;
    tree.gate = Gate::kOr;
    tree.leaves = cat->second;
    harm.trees.emplace(vm.id, std::move(tree));
  }

  for (const auto& [src, dst] : scenario.edges) {
    if (src != kAttackerId && !harm.has_vm(src))
      throw ModelError("edge references unknown node " + std::to_string(src));
    if (!harm.has_vm(dst))
      throw ModelError("edge references unknown node " + std::to_string(dst));
    harm.edges.emplace(src, dst);
  }

  if (!harm.has_vm(harm.target_id))
    throw ModelError("target " + std::to_string(harm.target_id) + " is not a vm");
  if (!reachable(harm, harm.attacker_id, harm.target_id))
    throw ModelError("target unreachable");
  return harm;
}

std::vector<std::string> validate(const Harm& harm) {
  std::vector<std::string> violations;
  auto flag = [&violations](const std::string& msg) { violations.push_back(msg); };

  if (harm.vms.empty()) flag("model has no vms");
  if (harm.attacker_id == harm.target_id) flag("attacker equals target");
  if (!harm.vms.empty() && !harm.has_vm(harm.target_id))
    flag("target is not a vm");

  for (const auto& [id, vm] : harm.vms) {
    if (id <= kAttackerId) flag("vm id " + std::to_string(id) + " is reserved");
    if (vm.asset_value < 0.0)
      flag("vm" + std::to_string(id) + " has negative asset value");
    if (vm.aro < 0.0) flag("vm" + std::to_string(id) + " has negative aro");
    if (harm.trees.find(id) == harm.trees.end())
      flag("vm" + std::to_string(id) + " has no attack tree");
  }
  for (const auto& [id, tree] : harm.trees) {
    if (!harm.has_vm(id))
      flag("attack tree for unknown vm " + std::to_string(id));
    if (tree.root != id)
      flag("attack tree root mismatch for vm" + std::to_string(id));
    if (tree.leaves.empty())
      flag("vm" + std::to_string(id) + " attack tree has no leaves");
    for (const Vulnerability& leaf : tree.leaves) {
      if (leaf.exploitability < 0.0 || leaf.exploitability > 1.0)
        flag("vm" + std::to_string(id) + " leaf " + leaf.id +
             " exploitability outside [0,1]");
      if (leaf.exposure_factor < 0.0 || leaf.exposure_factor > 1.0)
        flag("vm" + std::to_string(id) + " leaf " + leaf.id +
             " exposure factor outside [0,1]");
      if (leaf.attack_cost <= 0.0)
        flag("vm" + std::to_string(id) + " leaf " + leaf.id +
             " attack cost must be positive");
      if (leaf.impact < 0.0)
        flag("vm" + std::to_string(id) + " leaf " + leaf.id + " negative impact");
    }
  }

  for (const auto& [src, dst] : harm.edges) {
    if (src != harm.attacker_id && !harm.has_vm(src))
      flag("edge from unknown node " + std::to_string(src));
    if (dst != harm.attacker_id && !harm.has_vm(dst))
      flag("edge to unknown node " + std::to_string(dst));
    if (dst == harm.attacker_id) flag("attacker has in-edge");
    if (src == dst) flag("self-loop on node " + std::to_string(src));
  }

  if (harm.has_vm(harm.target_id) &&
      !reachable(harm, harm.attacker_id, harm.target_id))
    flag("target unreachable");

  return violations;
}

}  // namespace mtdbench
