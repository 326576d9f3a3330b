#include "mtdbench/graph_analysis.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>

#include "mtdbench/rng.hpp"

namespace mtdbench {

namespace {

// Index-based view of the upper layer for the traversal-heavy code: node 0
// is the attacker, VMs follow in ascending id order.
struct IndexedGraph {
  std::vector<NodeId> ids;             // index -> node id
  std::map<NodeId, int> index;         // node id -> index
  std::vector<std::vector<int>> out;   // sorted by target id
  std::vector<std::vector<int>> in;
  int attacker = 0;
  int target = 0;

  explicit IndexedGraph(const Harm& harm) {
    ids.push_back(harm.attacker_id);
    for (const auto& [id, vm] : harm.vms) ids.push_back(id);
    for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = static_cast<int>(i);
    out.assign(ids.size(), {});
    in.assign(ids.size(), {});
    for (const auto& [src, dst] : harm.edges) {
      out[index.at(src)].push_back(index.at(dst));
      in[index.at(dst)].push_back(index.at(src));
    }
    for (auto& adj : out) std::sort(adj.begin(), adj.end());
    for (auto& adj : in) std::sort(adj.begin(), adj.end());
    attacker = index.at(harm.attacker_id);
    target = index.at(harm.target_id);
  }

  int size() const { return static_cast<int>(ids.size()); }
};

// VM-only subgraph indexed 0..n-1 in ascending VM id order, optionally
// symmetrized.
struct VmGraph {
  std::vector<NodeId> ids;
  std::map<NodeId, int> index;
  std::vector<std::vector<int>> adj;

  VmGraph(const Harm& harm, bool undirected) {
    for (const auto& [id, vm] : harm.vms) ids.push_back(id);
    for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = static_cast<int>(i);
    adj.assign(ids.size(), {});
    for (const auto& [src, dst] : harm.edges) {
      if (src == harm.attacker_id || dst == harm.attacker_id) continue;
      adj[index.at(src)].push_back(index.at(dst));
      if (undirected) adj[index.at(dst)].push_back(index.at(src));
    }
    for (auto& list : adj) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
  }

  int size() const { return static_cast<int>(ids.size()); }
};

// BFS shortest-path counts from one source: distances (-1 unreachable) and
// the number of distinct shortest paths to every node.
void bfs_sigma(const std::vector<std::vector<int>>& adj, int source,
               std::vector<int>& dist, std::vector<double>& sigma) {
  const int n = static_cast<int>(adj.size());
  dist.assign(n, -1);
  sigma.assign(n, 0.0);
  dist[source] = 0;
  sigma[source] = 1.0;
  std::deque<int> queue{source};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : adj[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
      if (dist[v] == dist[u] + 1) sigma[v] += sigma[u];
    }
  }
}

}  // namespace

AttackPathSet enumerate_attack_paths(const Harm& harm, const PathBounds& bounds) {
  const IndexedGraph g(harm);
  AttackPathSet result;
  for (const auto& [id, vm] : harm.vms) result.occurrence[id] = 0;

  const std::int64_t max_paths =
      bounds.max_paths.value_or(std::numeric_limits<std::int64_t>::max());
  const int max_len = bounds.max_len.value_or(std::numeric_limits<int>::max());
  if (max_paths <= 0) {
    result.truncated = true;
    return result;
  }

  std::vector<char> on_path(g.ids.size(), 0);
  std::vector<int> current;
  bool stop = false;

  // Neighbor lists are sorted, so this depth-first walk emits paths in
  // lexicographic node-id order.
  std::function<void(int)> walk = [&](int node) {
    if (stop) return;
    if (node == g.target) {
      AttackPath path;
      path.reserve(current.size());
      for (int idx : current) path.push_back(g.ids[idx]);
      result.paths.push_back(std::move(path));
      if (static_cast<std::int64_t>(result.paths.size()) >= max_paths) {
        // Unexplored branches may remain; report the cut either way.
        result.truncated = true;
        stop = true;
      }
      return;
    }
    if (static_cast<int>(current.size()) >= max_len) {
      result.truncated = true;
      return;
    }
    for (int next : g.out[node]) {
      if (on_path[next] || next == g.attacker) continue;
      on_path[next] = 1;
      current.push_back(next);
      walk(next);
      current.pop_back();
      on_path[next] = 0;
      if (stop) return;
    }
  };

  on_path[g.attacker] = 1;
  walk(g.attacker);

  for (const AttackPath& path : result.paths) {
    for (NodeId id : path) ++result.occurrence[id];
  }
  return result;
}

std::map<NodeId, std::int64_t> count_paths_dag(const Harm& harm) {
  const IndexedGraph g(harm);
  const int n = g.size();

  // Kahn topological order; leftovers mean a cycle.
  std::vector<int> indeg(n, 0);
  for (int u = 0; u < n; ++u)
    for (int v : g.out[u]) ++indeg[v];
  std::deque<int> ready;
  for (int u = 0; u < n; ++u)
    if (indeg[u] == 0) ready.push_back(u);
  std::vector<int> order;
  while (!ready.empty()) {
    const int u = ready.front();
    ready.pop_front();
    order.push_back(u);
    for (int v : g.out[u]) {
      if (--indeg[v] == 0) ready.push_back(v);
    }
  }
  if (static_cast<int>(order.size()) != n)
    throw AnalysisError("graph has cycle");

  std::vector<std::int64_t> from_attacker(n, 0), to_target(n, 0);
  from_attacker[g.attacker] = 1;
  for (int u : order) {
    for (int v : g.out[u]) from_attacker[v] += from_attacker[u];
  }
  to_target[g.target] = 1;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    for (int v : g.out[*it]) to_target[*it] += to_target[v];
  }

  std::map<NodeId, std::int64_t> occurrence;
  for (const auto& [id, vm] : harm.vms) {
    const int idx = g.index.at(id);
    occurrence[id] = from_attacker[idx] * to_target[idx];
  }
  return occurrence;
}

std::map<NodeId, double> closeness_all(const Harm& harm, ExecMode mode) {
  const VmGraph g(harm, /*undirected=*/true);
  const int n = g.size();
  std::vector<double> values(n, 0.0);
  std::vector<char> failed(n, 0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (mode == ExecMode::kParallel)
#endif
  for (int v = 0; v < n; ++v) {
    std::vector<int> dist;
    std::vector<double> sigma;
    bfs_sigma(g.adj, v, dist, sigma);
    long long sum = 0;
    int reachable_peers = 0;
    for (int u = 0; u < n; ++u) {
      if (u != v && dist[u] > 0) {
        sum += dist[u];
        ++reachable_peers;
      }
    }
    if (reachable_peers == 0) {
      failed[v] = 1;
    } else {
      values[v] = static_cast<double>(reachable_peers) / static_cast<double>(sum);
    }
  }
  (void)mode;

  std::map<NodeId, double> result;
  for (int v = 0; v < n; ++v) {
    if (failed[v]) continue;
    result[g.ids[v]] = values[v];
  }
  return result;
}

double closeness(const Harm& harm, NodeId vm) {
  if (!harm.has_vm(vm)) throw ModelError("unknown vm id " + std::to_string(vm));
  auto all = closeness_all(harm, ExecMode::kSerial);
  auto it = all.find(vm);
  if (it == all.end()) throw AnalysisError("no reachable peers");
  return it->second;
}

std::map<NodeId, double> betweenness_all(const Harm& harm, bool normalized,
                                         ExecMode mode) {
  const VmGraph g(harm, /*undirected=*/false);
  const int n = g.size();

  // All-pairs shortest-path counts first; the per-VM combines then read the
  // tables in a fixed (s,t) order so sums do not depend on thread count.
  std::vector<std::vector<int>> dist(n);
  std::vector<std::vector<double>> sigma(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (mode == ExecMode::kParallel)
#endif
  for (int s = 0; s < n; ++s) bfs_sigma(g.adj, s, dist[s], sigma[s]);

  std::vector<double> score(n, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (mode == ExecMode::kParallel)
#endif
  for (int v = 0; v < n; ++v) {
    double total = 0.0;
    for (int s = 0; s < n; ++s) {
      if (s == v || dist[s][v] < 0) continue;
      for (int t = 0; t < n; ++t) {
        if (t == s || t == v) continue;
        if (dist[s][t] < 0 || dist[v][t] < 0) continue;
        if (dist[s][v] + dist[v][t] != dist[s][t]) continue;
        total += sigma[s][v] * sigma[v][t] / sigma[s][t];
      }
    }
    score[v] = total;
  }
  (void)mode;

  const double scale =
      normalized && n > 2 ? 1.0 / (static_cast<double>(n - 1) * (n - 2)) : 1.0;
  std::map<NodeId, double> result;
  for (int v = 0; v < n; ++v) result[g.ids[v]] = score[v] * scale;
  return result;
}

double betweenness(const Harm& harm, NodeId vm, bool normalized) {
  if (!harm.has_vm(vm)) throw ModelError("unknown vm id " + std::to_string(vm));
  return betweenness_all(harm, normalized, ExecMode::kSerial).at(vm);
}

std::vector<NodeId> select_vms(const Harm& harm, SelectionStrategy strategy,
                               int m, std::uint64_t seed) {
  std::vector<NodeId> eligible;
  for (const auto& [id, vm] : harm.vms) {
    if (id != harm.target_id) eligible.push_back(id);
  }
  if (m < 1 || m > static_cast<int>(eligible.size()))
    throw AnalysisError("selection count " + std::to_string(m) +
                        " exceeds eligible vm count " +
                        std::to_string(eligible.size()));

  if (strategy == SelectionStrategy::kRvs) {
    Xoshiro256 rng(seed);
    return sample_without_replacement(eligible, static_cast<std::size_t>(m), rng);
  }

  const auto scores = strategy == SelectionStrategy::kBvs
                          ? betweenness_all(harm)
                          : closeness_all(harm);
  auto score_of = [&scores](NodeId id) {
    auto it = scores.find(id);
    return it == scores.end() ? 0.0 : it->second;
  };
  std::stable_sort(eligible.begin(), eligible.end(), [&](NodeId a, NodeId b) {
    const double sa = score_of(a), sb = score_of(b);
    if (sa != sb) return sa > sb;
    return a < b;
  });
  eligible.resize(static_cast<std::size_t>(m));
  return eligible;
}

int shortest_hop_count(const Harm& harm) {
  const IndexedGraph g(harm);
  std::vector<int> dist(g.ids.size(), -1);
  std::deque<int> queue{g.attacker};
  dist[g.attacker] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : g.out[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  if (dist[g.target] < 0) throw AnalysisError("target unreachable");
  return dist[g.target];
}

std::vector<AttackPath> shortest_path_set(const Harm& harm) {
  const IndexedGraph g(harm);
  const int n = g.size();

  std::vector<int> dist_from(n, -1), dist_to(n, -1);
  {
    std::deque<int> queue{g.attacker};
    dist_from[g.attacker] = 0;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : g.out[u]) {
        if (dist_from[v] < 0) {
          dist_from[v] = dist_from[u] + 1;
          queue.push_back(v);
        }
      }
    }
    std::deque<int> back{g.target};
    dist_to[g.target] = 0;
    while (!back.empty()) {
      const int u = back.front();
      back.pop_front();
      for (int v : g.in[u]) {
        if (dist_to[v] < 0) {
          dist_to[v] = dist_to[u] + 1;
          back.push_back(v);
        }
      }
    }
  }
  if (dist_from[g.target] < 0) throw AnalysisError("target unreachable");
  const int total = dist_from[g.target];

  // Walk only edges that stay on some minimum-hop route.
  std::vector<AttackPath> sap;
  std::vector<int> current;
  std::function<void(int)> walk = [&](int node) {
    if (node == g.target) {
      AttackPath path;
      for (int idx : current) path.push_back(g.ids[idx]);
      sap.push_back(std::move(path));
      return;
    }
    for (int next : g.out[node]) {
      if (dist_from[next] != dist_from[node] + 1) continue;
      if (dist_to[next] < 0 || dist_from[next] + dist_to[next] != total) continue;
      current.push_back(next);
      walk(next);
      current.pop_back();
    }
  };
  walk(g.attacker);

  std::vector<int> indeg(n, 0);
  for (int u = 0; u < n; ++u)
    for (int v : g.out[u]) ++indeg[v];
  auto indegree_sum = [&](const AttackPath& path) {
    int sum = 0;
    for (NodeId id : path) sum += indeg[g.index.at(id)];
    return sum;
  };

  std::stable_sort(sap.begin(), sap.end(),
                   [&](const AttackPath& a, const AttackPath& b) {
                     const int ia = indegree_sum(a), ib = indegree_sum(b);
                     if (ia != ib) return ia < ib;
                     return a < b;
                   });
  return sap;
}

AttackPath critical_shortest_path(const Harm& harm) {
  return shortest_path_set(harm).front();
}

}  // namespace mtdbench
