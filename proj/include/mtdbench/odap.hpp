#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mtdbench/economic_metrics.hpp"
#include "mtdbench/harm.hpp"
#include "mtdbench/parallel.hpp"

namespace mtdbench {

// Objective sign convention. kPaperLiteral scores an assignment of backup c
// to VM i as occurrence*AV_c*EF_c*ARO - CS_c - occurrence*SLE_i*ARO (the
// ALE-difference form the exported model uses); kBenefit scores it as
// occurrence*(SLE_i - AV_c*EF_c)*ARO - CS_c, positive when the deployment
// reduces expected loss net of its price. kBenefit is the CLI default for
// decisions; kPaperLiteral exists for model export and cross-checking.
enum class OdapConvention { kBenefit, kPaperLiteral };

// Data of one optimal-diversity-assignment problem: assign each VM at most
// one backup OS, never the same backup on two adjacent VMs, maximizing the
// expected net benefit.
struct OdapInstance {
  std::vector<NodeId> vms;  // assignable VMs, ascending id (no attacker/target)
  std::vector<std::pair<int, int>> adjacency;  // index pairs (i<j) into vms
  std::map<NodeId, std::int64_t> occurrence;
  std::map<NodeId, double> sle;
  std::map<NodeId, double> aro;
  std::vector<BackupOs> backups;
  double big_m = 100000.0;
  OdapConvention convention = OdapConvention::kBenefit;
  // Constant added to every objective value (exported and evaluated).
  double objective_offset = 0.0;
};

// VM id -> assigned backup index (1-based); 0 or absent means unassigned.
struct DiversityAssignment {
  std::map<NodeId, int> assignment;
  double enb = 0.0;
  bool feasible = true;
};

// Derives the instance from a Harm: occurrence via the DAG closed form, SLE
// via sle_vm, coloring adjacency from the upper-layer edges restricted to
// assignable VMs. Throws AnalysisError on an empty backup catalog.
OdapInstance build_instance(const Harm& harm,
                            const std::vector<BackupOs>& backups,
                            OdapConvention convention,
                            SleMode mode = SleMode::kMaxEf);

// Net objective contribution of assigning backup `c` (1-based) to the VM at
// `vm_index`, coloring ignored.
double assignment_net(const OdapInstance& instance, int vm_index, int c);

// Objective value of an arbitrary assignment under the instance convention,
// including a -big_m penalty per adjacent same-backup pair. Throws
// AnalysisError on unknown VM or backup references.
double enb(const OdapInstance& instance,
           const std::map<NodeId, int>& assignment);

// Exhaustive search over all (k+1)^n assignments, skipping subtrees that
// already violate the coloring constraint. Optimal and deterministic: among
// equal objectives the lexicographically smallest assignment vector wins
// (ascending VM id, none before any backup index). The parallel kernel
// splits the enumeration by assignment prefix and merges thread-local bests
// with the same tie-break, so results are independent of thread count.
// Throws AnalysisError when (k+1)^n exceeds `bound`.
DiversityAssignment solve_bruteforce(const OdapInstance& instance,
                                     ExecMode mode = ExecMode::kParallel,
                                     double bound = 1e9);

// Branch-and-bound: VMs ordered by descending occurrence, upper bound at
// each node is the sum of max(0, best unconstrained net) over unassigned
// VMs. Prunes only strictly dominated subtrees, so it returns the same
// lexicographic tie-broken optimum as solve_bruteforce.
DiversityAssignment solve_exact(const OdapInstance& instance);

// Coloring check independent of the solvers: no adjacent pair shares a
// backup index.
bool proper_coloring(const OdapInstance& instance,
                     const std::map<NodeId, int>& assignment);

// Binary-program text mirroring the solver input layout: an explicit
// Maximize expansion (offset, d/e/f coefficient terms at one decimal
// place), per-(color, edge) linking rows f_ij >= d_ic + d_jc - 1, one
// sum_c d_ic = e_i row per VM, and the Binaries list (including the d_i,0
// "keep current OS" names).
std::string export_model(const OdapInstance& instance);
void export_model(const OdapInstance& instance,
                  const std::filesystem::path& path);

std::string assignment_to_json(const OdapInstance& instance,
                               const DiversityAssignment& solution);

}  // namespace mtdbench
