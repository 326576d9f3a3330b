#include "mtdbench/security_metrics.hpp"

#include <cmath>

namespace mtdbench {

namespace {

// Leaf attaining max(exploitability * impact); equal products resolve to
// the cheaper exploit.
const Vulnerability& dominant_leaf(const Harm& harm, NodeId vm) {
  const AttackTree& tree = harm.tree(vm);
  if (tree.gate != Gate::kOr)
    throw AnalysisError("unsupported gate: vm" + std::to_string(vm) +
                        " metrics are defined for OR trees only");
  if (tree.leaves.empty())
    throw ModelError("vm" + std::to_string(vm) + " attack tree has no leaves");
  const Vulnerability* best = &tree.leaves.front();
  double best_risk = best->exploitability * best->impact;
  for (const Vulnerability& leaf : tree.leaves) {
    const double risk = leaf.exploitability * leaf.impact;
    if (risk > best_risk ||
        (risk == best_risk && leaf.attack_cost < best->attack_cost)) {
      best = &leaf;
      best_risk = risk;
    }
  }
  return *best;
}

}  // namespace

double risk_vm(const Harm& harm, NodeId vm) {
  const Vulnerability& leaf = dominant_leaf(harm, vm);
  return leaf.exploitability * leaf.impact;
}

double attack_cost_vm(const Harm& harm, NodeId vm) {
  return dominant_leaf(harm, vm).attack_cost;
}

double roa_vm(const Harm& harm, NodeId vm) {
  const Vulnerability& leaf = dominant_leaf(harm, vm);
  return leaf.exploitability * leaf.impact / leaf.attack_cost;
}

double risk_path(const Harm& harm, const AttackPath& path) {
  double total = 0.0;
  for (NodeId vm : path) total += risk_vm(harm, vm);
  return total;
}

SecurityReport security_report(const Harm& harm, const AttackPathSet& paths) {
  SecurityReport report;
  report.path_count = static_cast<std::int64_t>(paths.paths.size());
  report.truncated = paths.truncated;
  for (const auto& [id, vm] : harm.vms) {
    VmSecurity entry;
    entry.risk = risk_vm(harm, id);
    entry.ac = attack_cost_vm(harm, id);
    entry.roa = entry.risk / entry.ac;
    report.per_vm.emplace(id, entry);

    auto hit = paths.occurrence.find(id);
    const double count =
        hit == paths.occurrence.end() ? 0.0 : static_cast<double>(hit->second);
    report.risk_total += entry.risk * count;
    report.attack_cost_total += entry.ac * count;
    report.roa_total += entry.roa * count;
  }
  return report;
}

ReliabilityCurve reliability(const Harm& harm, double rate, double horizon,
                             double step, int redundancy_r) {
  if (rate <= 0.0) throw AnalysisError("attack rate must be positive");
  if (horizon <= 0.0) throw AnalysisError("horizon must be positive");
  if (step <= 0.0) throw AnalysisError("step must be positive");
  if (redundancy_r < 0) throw AnalysisError("redundancy stages must be >= 0");

  ReliabilityCurve curve;
  curve.rate = rate;
  curve.horizon = horizon;
  curve.stages = shortest_hop_count(harm) + redundancy_r;

  // Poisson tail: the compromise needs `stages` attack arrivals, so the
  // system survives at t while fewer than `stages` arrived.
  auto survival = [&curve, rate](double t) {
    const double lt = rate * t;
    double term = std::exp(-lt);
    double sum = term;
    for (int k = 1; k < curve.stages; ++k) {
      term *= lt / static_cast<double>(k);
      sum += term;
    }
    return sum;
  };

  for (double t = 0.0; t < horizon + step * 0.5; t += step)
    curve.samples.emplace_back(t, survival(t));
  return curve;
}

}  // namespace mtdbench
