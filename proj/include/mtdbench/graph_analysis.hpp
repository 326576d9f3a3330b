#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "mtdbench/harm.hpp"
#include "mtdbench/parallel.hpp"

namespace mtdbench {

// Attacker -> target route: first hop through target inclusive, attacker
// excluded. Always simple and edge-consistent.
using AttackPath = std::vector<NodeId>;

struct AttackPathSet {
  std::vector<AttackPath> paths;  // lexicographic by node-id sequence
  std::map<NodeId, std::int64_t> occurrence;  // vm -> #paths containing it
  bool truncated = false;
};

struct PathBounds {
  std::optional<std::int64_t> max_paths;
  std::optional<int> max_len;  // max VMs per path
};

// Depth-first enumeration of all simple attacker->target paths, emitted in
// lexicographic order. Bounds stop the walk early and set `truncated`;
// `occurrence` then counts only the returned paths. An unreachable target
// yields an empty set.
AttackPathSet enumerate_attack_paths(const Harm& harm,
                                     const PathBounds& bounds = {});

// DAG closed form for per-VM path occurrence:
//   occurrence[v] = (#paths attacker->v) * (#paths v->target),
// by dynamic programming in topological order. The independent cross-check
// for enumerate_attack_paths on acyclic graphs; occurrence[target] is the
// total path count. Throws AnalysisError("graph has cycle") otherwise.
std::map<NodeId, std::int64_t> count_paths_dag(const Harm& harm);

// Closeness centrality over the VM-only subgraph treated as undirected:
// (n-1) / sum of BFS distances, with n and the sum restricted to the
// component reachable from `vm`. Throws AnalysisError when the VM has no
// reachable peers.
double closeness(const Harm& harm, NodeId vm);

// Betweenness centrality on the VM-only directed subgraph: sum over ordered
// pairs (s,t), both distinct from vm, of the fraction of s->t shortest paths
// passing through vm. `normalized` divides by (n-1)(n-2).
double betweenness(const Harm& harm, NodeId vm, bool normalized = false);

// All-VM betweenness in one pass. The parallel kernel distributes the
// per-VM combine loops across threads; per-VM accumulation order is fixed,
// so serial and parallel results are bit-identical.
std::map<NodeId, double> betweenness_all(const Harm& harm,
                                         bool normalized = false,
                                         ExecMode mode = ExecMode::kParallel);
std::map<NodeId, double> closeness_all(const Harm& harm,
                                       ExecMode mode = ExecMode::kParallel);

enum class SelectionStrategy { kBvs, kCvs, kRvs };

// Picks m VMs for an MTD deployment. Attacker and target are never
// candidates. BVS/CVS order by descending betweenness/closeness with
// ascending-id tie-break; RVS is a seeded uniform draw without replacement
// (deterministic per seed). Throws AnalysisError when m exceeds the number
// of eligible VMs.
std::vector<NodeId> select_vms(const Harm& harm, SelectionStrategy strategy,
                               int m, std::uint64_t seed = 0);

// Number of edges on a minimum-hop attacker->target path.
int shortest_hop_count(const Harm& harm);

// All minimum-hop attacker->target paths, ordered by (upper-layer in-degree
// sum over the path's VMs, then lexicographic node-id sequence). Front is
// the migration-critical path. Throws AnalysisError when the target is
// unreachable.
std::vector<AttackPath> shortest_path_set(const Harm& harm);

// Front of shortest_path_set: the minimum-length path whose VMs have the
// smallest combined in-degree, lexicographic tie-break.
AttackPath critical_shortest_path(const Harm& harm);

}  // namespace mtdbench
