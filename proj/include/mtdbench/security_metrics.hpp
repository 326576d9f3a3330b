#pragma once

#include <map>
#include <vector>

#include "mtdbench/graph_analysis.hpp"
#include "mtdbench/harm.hpp"

namespace mtdbench {

struct VmSecurity {
  double risk = 0.0;
  double ac = 0.0;
  double roa = 0.0;
};

struct SecurityReport {
  double risk_total = 0.0;
  double attack_cost_total = 0.0;
  double roa_total = 0.0;
  std::map<NodeId, VmSecurity> per_vm;
  std::int64_t path_count = 0;
  // Totals from a truncated path set are lower bounds, not failures.
  bool truncated = false;
};

// Attack-success survival curve: probability that an L-stage compromise is
// still incomplete at time t under a Poisson attack stream of the given
// rate. Stages = shortest attacker->target hop count + redundancy_r.
struct ReliabilityCurve {
  double rate = 0.0;    // attacks per hour
  double horizon = 0.0; // hours
  int stages = 1;
  std::vector<std::pair<double, double>> samples;  // (t, R(t))
};

// Max over the OR tree's leaves of exploitability * impact. AND gates are
// not evaluated and raise AnalysisError.
double risk_vm(const Harm& harm, NodeId vm);

// Attack cost of the leaf attaining the risk_vm maximum; equal maxima
// resolve to the cheaper exploit.
double attack_cost_vm(const Harm& harm, NodeId vm);

// risk_vm / attack_cost_vm.
double roa_vm(const Harm& harm, NodeId vm);

// Sum of per-VM risk along one path.
double risk_path(const Harm& harm, const AttackPath& path);

// Aggregates risk / attack cost / return-on-attack over every path in the
// set. Totals equal sum over VMs of (per-VM value * occurrence count).
SecurityReport security_report(const Harm& harm, const AttackPathSet& paths);

// Erlang-style stage survival: R(t) = sum_{k<L} e^{-rate*t} (rate*t)^k / k!.
// Sampled from t=0 to horizon at `step` intervals (horizon included).
ReliabilityCurve reliability(const Harm& harm, double rate, double horizon,
                             double step, int redundancy_r = 0);

}  // namespace mtdbench
