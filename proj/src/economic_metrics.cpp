#include "mtdbench/economic_metrics.hpp"

#include <algorithm>

namespace mtdbench {

double sle_vm(const Harm& harm, NodeId vm, SleMode mode) {
  const AttackTree& tree = harm.tree(vm);
  const double av = harm.vm(vm).asset_value;
  if (mode == SleMode::kMaxEf) {
    double max_ef = 0.0;
    for (const Vulnerability& leaf : tree.leaves)
      max_ef = std::max(max_ef, leaf.exposure_factor);
    return max_ef * av;
  }
  double survive = 1.0;
  for (const Vulnerability& leaf : tree.leaves)
    survive *= 1.0 - leaf.exposure_factor;
  return (1.0 - survive) * av;
}

double ale_total(const Harm& harm, const AttackPathSet& paths, SleMode mode) {
  double total = 0.0;
  for (const auto& [id, vm] : harm.vms) {
    auto hit = paths.occurrence.find(id);
    if (hit == paths.occurrence.end() || hit->second == 0) continue;
    total += sle_vm(harm, id, mode) * vm.aro * static_cast<double>(hit->second);
  }
  return total;
}

double benefit_of_security(double ale_before, double ale_after) {
  return ale_before - ale_after;
}

double mitigation_factor(double ale_before, double ale_after) {
  if (ale_before == 0.0)
    throw AnalysisError("mitigation factor undefined for zero baseline ALE");
  if (ale_after >= ale_before) return 0.0;
  return 1.0 - ale_after / ale_before;
}

double cost_of_security(const std::vector<MtdAction>& actions,
                        const UnitCosts& costs) {
  double total = 0.0;
  for (const MtdAction& action : actions) {
    switch (action.kind) {
      case MtdKind::kShuffle:
        total += costs.shuffle;
        break;
      case MtdKind::kDiversity:
        // Catalog variants carry their own price; a variant without one is
        // malformed (BackupOs requires cost_of_security > 0).
        if (action.variant && action.variant->cost_of_security > 0.0)
          total += action.variant->cost_of_security;
        else
          total += costs.diversity;
        break;
      case MtdKind::kRedundancy:
        if (!costs.redundancy)
          throw AnalysisError("no configured cost for redundancy actions");
        total += *costs.redundancy;
        break;
    }
  }
  return total;
}

double rosi(double bs, double cs) {
  if (cs == 0.0) throw AnalysisError("rosi undefined for zero cost of security");
  return (bs - cs) / cs;
}

EconomicReport economic_report(const Harm& harm, const AttackPathSet& paths,
                               SleMode mode) {
  EconomicReport report;
  report.sle_mode = mode;
  report.truncated = paths.truncated;
  for (const auto& [id, vm] : harm.vms)
    report.sle_per_vm[id] = sle_vm(harm, id, mode);
  report.ale_total = ale_total(harm, paths, mode);
  return report;
}

}  // namespace mtdbench
