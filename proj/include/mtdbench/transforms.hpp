#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtdbench/economic_metrics.hpp"
#include "mtdbench/graph_analysis.hpp"
#include "mtdbench/harm.hpp"
#include "mtdbench/mtd_action.hpp"
#include "mtdbench/parallel.hpp"
#include "mtdbench/security_metrics.hpp"

namespace mtdbench {

// Shared evaluation knobs for transform reports and sweeps.
struct EvalOptions {
  SleMode sle_mode = SleMode::kMaxEf;
  UnitCosts costs;
  PathBounds bounds;
  ExecMode exec = ExecMode::kParallel;
};

// Point on a multi-deployment curve: metrics after applying the first x
// actions of a selection.
struct CurvePoint {
  int x = 0;
  double risk = 0.0;
  double ac = 0.0;
  double roa = 0.0;
  double ale = 0.0;
  double rosi = 0.0;
  double cs = 0.0;
};

struct TransformReport {
  std::vector<MtdAction> actions;
  SecurityReport security_before, security_after;
  EconomicReport economic_before, economic_after;
  std::vector<CurvePoint> curve;  // filled by multi_diversity
};

// Live-migration rewiring. Detaches vm k (drops every edge touching it) and
// splices it into the critical shortest path of the original graph: the
// path's first edge (u,w) becomes u->k plus k->w. When k itself sits on the
// critical path, the next path in the (in-degree sum, lexicographic) order
// is used; if every shortest path runs through k the shuffle fails. The
// lower layer is untouched.
Harm shuffle(const Harm& harm, NodeId k);

// OS replacement on vm k. The upper layer is preserved; k's attack tree
// becomes the variant's vulnerability list and k's asset value becomes the
// variant's (when it defines one). Catalog-only variants (no vulnerability
// list) get a single placeholder leaf carrying the variant's exposure
// factor with zeroed attack scores: economics stay exact, risk reads 0.
// Replacing an OS with itself is a no-op.
Harm diversity(const Harm& harm, NodeId k, const BackupOs& variant);

// Adds r replicas of vm k (fresh ids above the current maximum), each
// copying k's in-edges, out-edges, attack tree, OS and asset value.
// 1 <= r <= limit.
Harm redundancy(const Harm& harm, NodeId k, int r, int limit = 5);

// Fixed composition order: redundancy, then diversity, then shuffle.
Harm combine_sdr(const Harm& harm, NodeId k_s, NodeId k_d,
                 const BackupOs& variant, NodeId k_r, int r, int limit = 5);

// One sweep row: metrics of the cloud after transforming a single VM.
struct SweepRow {
  NodeId vm = 0;
  double risk = 0.0;
  double ac = 0.0;
  double roa = 0.0;
  double ale = 0.0;
  double bs = 0.0;
  double rosi = 0.0;
  double mf = 0.0;
};

// Per-candidate table plus the winner of each column (risk/roa/ale minimal,
// ac/bs/rosi/mf maximal; ties resolve to the lowest VM id).
struct SweepTable {
  std::vector<SweepRow> rows;  // ascending VM id
  SweepRow baseline;           // untransformed metrics, vm = 0
  std::map<std::string, NodeId> best;  // column name -> winning VM
};

// Applies the transform to every eligible VM (all VMs except the target) in
// turn and tabulates the resulting metrics. Candidates are evaluated
// independently (parallel under EvalOptions::exec); row order is by VM id
// regardless of execution order.
SweepTable sweep_shuffle(const Harm& harm, const EvalOptions& opts = {});
SweepTable sweep_diversity(const Harm& harm, const BackupOs& variant,
                           const EvalOptions& opts = {});

// CSV with the fixed column order vm,risk,ac,roa,ale,bs,rosi,mf followed by
// a "best" row naming the winning VM per column.
std::string sweep_to_csv(const SweepTable& table);

// Diversifies the x VMs chosen by the strategy (variants cycle across the
// selection in order) and reports the metric curve for 1..x cumulative
// deployments plus the full before/after reports at x.
TransformReport multi_diversity(const Harm& harm, SelectionStrategy strategy,
                                int x, const std::vector<BackupOs>& variants,
                                std::uint64_t seed = 0,
                                const EvalOptions& opts = {});

// Before/after report for an arbitrary already-transformed pair.
TransformReport compare(const Harm& before, const Harm& after,
                        std::vector<MtdAction> actions,
                        const EvalOptions& opts = {});

}  // namespace mtdbench
