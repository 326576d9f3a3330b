#pragma once

#include <map>
#include <optional>
#include <vector>

#include "mtdbench/graph_analysis.hpp"
#include "mtdbench/harm.hpp"
#include "mtdbench/mtd_action.hpp"

namespace mtdbench {

// How a VM's single loss expectancy combines its leaf exposure factors.
// kCompound multiplies survival fractions, (1 - prod(1-EF)) * AV; kMaxEf
// takes (max EF) * AV. kMaxEf is the default throughout the CLI.
enum class SleMode { kCompound, kMaxEf };

// Per-operation deployment prices. Redundancy has no built-in price; costing
// a redundancy action without configuring one is an error.
struct UnitCosts {
  double shuffle = 20.0;
  double diversity = 55.0;
  std::optional<double> redundancy;
};

struct EconomicReport {
  std::map<NodeId, double> sle_per_vm;
  double ale_total = 0.0;
  double bs = 0.0;    // vs. baseline; 0 when this report is the baseline
  double mf = 0.0;    // mitigation factor in [0,1]
  double cs = 0.0;    // cost of the applied actions
  double rosi = 0.0;  // meaningful only when cs > 0
  SleMode sle_mode = SleMode::kMaxEf;
  bool truncated = false;  // lower-bound ALE from a truncated path set
};

double sle_vm(const Harm& harm, NodeId vm, SleMode mode);

// Expected annual loss over the path set:
//   sum over paths, over VMs on the path, of SLE * ARO
// = sum over VMs of SLE * ARO * occurrence.
double ale_total(const Harm& harm, const AttackPathSet& paths, SleMode mode);

// ALE reduction achieved by a defense; negative when the action made the
// expected loss worse.
double benefit_of_security(double ale_before, double ale_after);

// Relative ALE reduction, clamped to 0 when the defense did not help.
// Throws AnalysisError when ale_before is 0.
double mitigation_factor(double ale_before, double ale_after);

// Total deployment price of an action list. Diversity charges the variant's
// own cost_of_security (catalog entries carry their price; plain variants
// default to the flat rate).
double cost_of_security(const std::vector<MtdAction>& actions,
                        const UnitCosts& costs);

// (bs - cs) / cs. Throws AnalysisError when cs is 0.
double rosi(double bs, double cs);

// Baseline economic report (no actions applied): SLE per VM + total ALE.
EconomicReport economic_report(const Harm& harm, const AttackPathSet& paths,
                               SleMode mode);

}  // namespace mtdbench
