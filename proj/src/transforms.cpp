#include "mtdbench/transforms.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "mtdbench/report_io.hpp"

namespace mtdbench {

namespace {

void require_vm(const Harm& harm, NodeId k) {
  if (!harm.has_vm(k)) throw ModelError("unknown vm id " + std::to_string(k));
}

Vulnerability placeholder_leaf(const BackupOs& variant) {
  Vulnerability leaf;
  leaf.id = "v1," + variant.name;
  leaf.cve_id = "";
  leaf.impact = 0.0;
  leaf.exploitability = 0.0;
  leaf.base_score = 0.0;
  leaf.attack_cost = 1.0;  // required positive; carries no exploit data
  leaf.exposure_factor = variant.exposure_factor;
  leaf.threat = "unpublished";
  return leaf;
}

}  // namespace

Harm shuffle(const Harm& harm, NodeId k) {
  require_vm(harm, k);
  if (k == harm.target_id) throw AnalysisError("cannot shuffle the target vm");

  Harm result = harm;
  for (auto it = result.edges.begin(); it != result.edges.end();) {
    if (it->first == k || it->second == k)
      it = result.edges.erase(it);
    else
      ++it;
  }

  // Critical shortest path of the detached graph; k has no edges left, so
  // skipping paths through k is a no-op safeguard.
  std::vector<AttackPath> sap;
  try {
    sap = shortest_path_set(result);
  } catch (const AnalysisError&) {
    throw AnalysisError("no shortest path avoiding vm" + std::to_string(k) +
                        " exists");
  }
  const AttackPath* chosen = nullptr;
  for (const AttackPath& path : sap) {
    if (std::find(path.begin(), path.end(), k) == path.end()) {
      chosen = &path;
      break;
    }
  }
  if (chosen == nullptr)
    throw AnalysisError("no shortest path avoiding vm" + std::to_string(k) +
                        " exists");

  const NodeId u = harm.attacker_id;
  const NodeId w = chosen->front();
  result.edges.erase({u, w});
  result.edges.insert({u, k});
  result.edges.insert({k, w});
  return result;
}

Harm diversity(const Harm& harm, NodeId k, const BackupOs& variant) {
  require_vm(harm, k);
  const bool has_tree =
      variant.vulnerabilities && !variant.vulnerabilities->empty();
  if (!has_tree && variant.exposure_factor <= 0.0 && variant.asset_value <= 0.0)
    throw ModelError("variant '" + variant.name +
                     "' carries neither a vulnerability list nor (EF, AV) data");

  Harm result = harm;
  if (harm.vm(k).os_name == variant.name) return result;  // same OS: no-op

  AttackTree tree;
  tree.root = k;
  tree.gate = Gate::kOr;
  tree.leaves = has_tree ? *variant.vulnerabilities
                         : std::vector<Vulnerability>{placeholder_leaf(variant)};
  result.trees[k] = std::move(tree);
  result.vms[k].os_name = variant.name;
  if (variant.asset_value > 0.0) result.vms[k].asset_value = variant.asset_value;
  return result;
}

Harm redundancy(const Harm& harm, NodeId k, int r, int limit) {
  require_vm(harm, k);
  if (r < 1) throw AnalysisError("replica count must be >= 1");
  if (r > limit)
    throw AnalysisError("replica count " + std::to_string(r) +
                        " exceeds limit " + std::to_string(limit));

  Harm result = harm;
  NodeId next_id = harm.vms.rbegin()->first;
  std::vector<NodeId> in = harm.in_neighbors(k);
  std::vector<NodeId> out = harm.out_neighbors(k);
  for (int i = 0; i < r; ++i) {
    const NodeId replica = ++next_id;
    VmNode node = harm.vm(k);
    node.id = replica;
    result.vms.emplace(replica, std::move(node));
    AttackTree tree = harm.tree(k);
    tree.root = replica;
    result.trees.emplace(replica, std::move(tree));
    for (NodeId u : in) result.edges.insert({u, replica});
    for (NodeId w : out) result.edges.insert({replica, w});
  }
  return result;
}

Harm combine_sdr(const Harm& harm, NodeId k_s, NodeId k_d,
                 const BackupOs& variant, NodeId k_r, int r, int limit) {
  return shuffle(diversity(redundancy(harm, k_r, r, limit), k_d, variant), k_s);
}

namespace {

struct Baseline {
  AttackPathSet paths;
  SecurityReport security;
  EconomicReport economic;
};

Baseline evaluate_baseline(const Harm& harm, const EvalOptions& opts) {
  Baseline base;
  base.paths = enumerate_attack_paths(harm, opts.bounds);
  base.security = security_report(harm, base.paths);
  base.economic = economic_report(harm, base.paths, opts.sle_mode);
  return base;
}

SweepRow evaluate_candidate(const Harm& transformed, const Baseline& base,
                            double action_cost, const EvalOptions& opts,
                            NodeId vm) {
  const AttackPathSet paths = enumerate_attack_paths(transformed, opts.bounds);
  const SecurityReport sec = security_report(transformed, paths);
  const double ale = ale_total(transformed, paths, opts.sle_mode);
  SweepRow row;
  row.vm = vm;
  row.risk = sec.risk_total;
  row.ac = sec.attack_cost_total;
  row.roa = sec.roa_total;
  row.ale = ale;
  row.bs = benefit_of_security(base.economic.ale_total, ale);
  row.rosi = rosi(row.bs, action_cost);
  row.mf = mitigation_factor(base.economic.ale_total, ale);
  return row;
}

SweepTable run_sweep(const Harm& harm, const EvalOptions& opts,
                     const std::function<Harm(NodeId)>& transform,
                     const std::function<double(NodeId)>& action_cost) {
  const Baseline base = evaluate_baseline(harm, opts);

  std::vector<NodeId> candidates;
  for (const auto& [id, vm] : harm.vms) {
    if (id != harm.target_id) candidates.push_back(id);
  }

  const int count = static_cast<int>(candidates.size());
  std::vector<SweepRow> rows(candidates.size());
  std::vector<char> valid(candidates.size(), 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) \
    if (opts.exec == ExecMode::kParallel)
#endif
  for (int i = 0; i < count; ++i) {
    const NodeId vm = candidates[static_cast<std::size_t>(i)];
    try {
      const Harm transformed = transform(vm);
      rows[static_cast<std::size_t>(i)] =
          evaluate_candidate(transformed, base, action_cost(vm), opts, vm);
      valid[static_cast<std::size_t>(i)] = 1;
    } catch (const Error&) {
      // Candidate not transformable (e.g. detaching it cuts every path);
      // the table simply has no row for it.
    }
  }

  SweepTable table;
  table.baseline.vm = 0;
  table.baseline.risk = base.security.risk_total;
  table.baseline.ac = base.security.attack_cost_total;
  table.baseline.roa = base.security.roa_total;
  table.baseline.ale = base.economic.ale_total;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (valid[i]) table.rows.push_back(rows[i]);
  }

  auto pick = [&table](const char* column, auto accessor, bool maximize) {
    if (table.rows.empty()) return;
    const SweepRow* best = &table.rows.front();
    for (const SweepRow& row : table.rows) {
      const double v = accessor(row), b = accessor(*best);
      if (maximize ? v > b : v < b) best = &row;
    }
    table.best[column] = best->vm;
  };
  pick("risk", [](const SweepRow& r) { return r.risk; }, false);
  pick("ac", [](const SweepRow& r) { return r.ac; }, true);
  pick("roa", [](const SweepRow& r) { return r.roa; }, false);
  pick("ale", [](const SweepRow& r) { return r.ale; }, false);
  pick("bs", [](const SweepRow& r) { return r.bs; }, true);
  pick("rosi", [](const SweepRow& r) { return r.rosi; }, true);
  pick("mf", [](const SweepRow& r) { return r.mf; }, true);
  return table;
}

}  // namespace

SweepTable sweep_shuffle(const Harm& harm, const EvalOptions& opts) {
  return run_sweep(
      harm, opts, [&harm](NodeId vm) { return shuffle(harm, vm); },
      [&opts](NodeId) { return opts.costs.shuffle; });
}

SweepTable sweep_diversity(const Harm& harm, const BackupOs& variant,
                           const EvalOptions& opts) {
  const double cost = variant.cost_of_security > 0.0 ? variant.cost_of_security
                                                     : opts.costs.diversity;
  return run_sweep(
      harm, opts, [&harm, &variant](NodeId vm) { return diversity(harm, vm, variant); },
      [cost](NodeId) { return cost; });
}

std::string sweep_to_csv(const SweepTable& table) {
  std::ostringstream out;
  out << "vm,risk,ac,roa,ale,bs,rosi,mf\n";
  for (const SweepRow& row : table.rows) {
    out << "vm" << row.vm << ',' << format_fixed(row.risk, 4) << ','
        << format_fixed(row.ac, 4) << ',' << format_fixed(row.roa, 4) << ','
        << format_fixed(row.ale, 2) << ',' << format_fixed(row.bs, 2) << ','
        << format_fixed(row.rosi, 4) << ',' << format_fixed(row.mf, 4) << '\n';
  }
  out << "best";
  for (const char* column : {"risk", "ac", "roa", "ale", "bs", "rosi", "mf"}) {
    auto it = table.best.find(column);
    out << ',';
    if (it != table.best.end()) out << "vm" << it->second;
  }
  out << '\n';
  return out.str();
}

TransformReport compare(const Harm& before, const Harm& after,
                        std::vector<MtdAction> actions, const EvalOptions& opts) {
  TransformReport report;
  report.actions = std::move(actions);

  const Baseline base = evaluate_baseline(before, opts);
  report.security_before = base.security;
  report.economic_before = base.economic;

  const AttackPathSet after_paths = enumerate_attack_paths(after, opts.bounds);
  report.security_after = security_report(after, after_paths);
  report.economic_after = economic_report(after, after_paths, opts.sle_mode);
  report.economic_after.bs = benefit_of_security(base.economic.ale_total,
                                                 report.economic_after.ale_total);
  report.economic_after.mf = mitigation_factor(base.economic.ale_total,
                                               report.economic_after.ale_total);
  report.economic_after.cs = cost_of_security(report.actions, opts.costs);
  if (report.economic_after.cs > 0.0)
    report.economic_after.rosi =
        rosi(report.economic_after.bs, report.economic_after.cs);
  return report;
}

TransformReport multi_diversity(const Harm& harm, SelectionStrategy strategy,
                                int x, const std::vector<BackupOs>& variants,
                                std::uint64_t seed, const EvalOptions& opts) {
  if (variants.empty()) throw AnalysisError("multi_diversity needs >= 1 variant");
  const std::vector<NodeId> chosen = select_vms(harm, strategy, x, seed);

  const Baseline base = evaluate_baseline(harm, opts);

  TransformReport report;
  Harm current = harm;
  double cost = 0.0;
  for (int i = 0; i < x; ++i) {
    const BackupOs& variant =
        variants[static_cast<std::size_t>(i) % variants.size()];
    const NodeId vm = chosen[static_cast<std::size_t>(i)];
    current = diversity(current, vm, variant);

    MtdAction action;
    action.kind = MtdKind::kDiversity;
    action.vm = vm;
    action.variant = variant;
    report.actions.push_back(action);
    cost += variant.cost_of_security > 0.0 ? variant.cost_of_security
                                           : opts.costs.diversity;

    const AttackPathSet paths = enumerate_attack_paths(current, opts.bounds);
    const SecurityReport sec = security_report(current, paths);
    CurvePoint point;
    point.x = i + 1;
    point.risk = sec.risk_total;
    point.ac = sec.attack_cost_total;
    point.roa = sec.roa_total;
    point.ale = ale_total(current, paths, opts.sle_mode);
    point.cs = cost;
    point.rosi = rosi(benefit_of_security(base.economic.ale_total, point.ale), cost);
    report.curve.push_back(point);
  }

  TransformReport full = compare(harm, current, report.actions, opts);
  full.curve = std::move(report.curve);
  return full;
}

}  // namespace mtdbench
