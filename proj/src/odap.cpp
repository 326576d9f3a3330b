#include "mtdbench/odap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

#include "mtdbench/graph_analysis.hpp"

namespace mtdbench {

namespace {

std::string fixed1(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", value);
  return buf;
}

// Solver working view: nets[i][c-1] is the objective gain of giving backup c
// to the i-th assignable VM; prior[i] lists adjacent indices j < i.
struct Tableau {
  int n = 0;
  int k = 0;
  std::vector<std::vector<double>> nets;
  std::vector<std::vector<int>> prior;
  std::vector<std::vector<int>> neighbors;

  explicit Tableau(const OdapInstance& inst) {
    n = static_cast<int>(inst.vms.size());
    k = static_cast<int>(inst.backups.size());
    nets.assign(n, std::vector<double>(k, 0.0));
    for (int i = 0; i < n; ++i)
      for (int c = 1; c <= k; ++c) nets[i][c - 1] = assignment_net(inst, i, c);
    prior.assign(n, {});
    neighbors.assign(n, {});
    for (const auto& [a, b] : inst.adjacency) {
      const int lo = std::min(a, b), hi = std::max(a, b);
      prior[hi].push_back(lo);
      neighbors[lo].push_back(hi);
      neighbors[hi].push_back(lo);
    }
  }

  // Objective of a full choice vector in canonical (ascending VM id) order.
  double canonical_value(const OdapInstance& inst,
                         const std::vector<int>& choice) const {
    double value = inst.objective_offset;
    for (int i = 0; i < n; ++i) {
      if (choice[i] > 0) value += nets[i][choice[i] - 1];
    }
    return value;
  }
};

DiversityAssignment pack(const OdapInstance& inst, const std::vector<int>& choice,
                         double value) {
  DiversityAssignment out;
  for (std::size_t i = 0; i < inst.vms.size(); ++i)
    out.assignment[inst.vms[i]] = choice[i];
  out.enb = value;
  out.feasible = proper_coloring(inst, out.assignment);
  return out;
}

}  // namespace

OdapInstance build_instance(const Harm& harm, const std::vector<BackupOs>& backups,
                            OdapConvention convention, SleMode mode) {
  if (backups.empty()) throw AnalysisError("empty backup catalog");

  OdapInstance inst;
  inst.convention = convention;
  inst.backups = backups;

  for (const auto& [id, vm] : harm.vms) {
    if (id == harm.target_id) continue;
    inst.vms.push_back(id);
    inst.sle[id] = sle_vm(harm, id, mode);
    inst.aro[id] = vm.aro;
  }

  std::map<NodeId, std::int64_t> occurrence;
  try {
    occurrence = count_paths_dag(harm);
  } catch (const AnalysisError&) {
    occurrence = enumerate_attack_paths(harm).occurrence;  // cyclic upper layer
  }
  for (NodeId id : inst.vms) inst.occurrence[id] = occurrence.at(id);

  std::map<NodeId, int> index;
  for (std::size_t i = 0; i < inst.vms.size(); ++i)
    index[inst.vms[i]] = static_cast<int>(i);
  std::set<std::pair<int, int>> pairs;
  for (const auto& [src, dst] : harm.edges) {
    auto a = index.find(src);
    auto b = index.find(dst);
    if (a == index.end() || b == index.end()) continue;
    pairs.emplace(std::min(a->second, b->second), std::max(a->second, b->second));
  }
  inst.adjacency.assign(pairs.begin(), pairs.end());
  return inst;
}

double assignment_net(const OdapInstance& inst, int vm_index, int c) {
  const NodeId id = inst.vms.at(static_cast<std::size_t>(vm_index));
  const BackupOs& backup = inst.backups.at(static_cast<std::size_t>(c - 1));
  const double occ = static_cast<double>(inst.occurrence.at(id));
  const double aro = inst.aro.at(id);
  const double replaced = backup.asset_value * backup.exposure_factor;
  if (inst.convention == OdapConvention::kPaperLiteral)
    return occ * replaced * aro - backup.cost_of_security -
           occ * inst.sle.at(id) * aro;
  return occ * (inst.sle.at(id) - replaced) * aro - backup.cost_of_security;
}

double enb(const OdapInstance& inst, const std::map<NodeId, int>& assignment) {
  std::map<NodeId, int> index;
  for (std::size_t i = 0; i < inst.vms.size(); ++i)
    index[inst.vms[i]] = static_cast<int>(i);

  std::vector<int> choice(inst.vms.size(), 0);
  for (const auto& [vm, c] : assignment) {
    auto it = index.find(vm);
    if (it == index.end())
      throw AnalysisError("assignment references unknown vm " + std::to_string(vm));
    if (c < 0 || c > static_cast<int>(inst.backups.size()))
      throw AnalysisError("assignment references unknown backup " +
                          std::to_string(c));
    choice[static_cast<std::size_t>(it->second)] = c;
  }

  double value = inst.objective_offset;
  for (std::size_t i = 0; i < choice.size(); ++i) {
    if (choice[i] > 0)
      value += assignment_net(inst, static_cast<int>(i), choice[i]);
  }
  for (const auto& [a, b] : inst.adjacency) {
    if (choice[static_cast<std::size_t>(a)] != 0 &&
        choice[static_cast<std::size_t>(a)] == choice[static_cast<std::size_t>(b)])
      value -= inst.big_m;
  }
  return value;
}

bool proper_coloring(const OdapInstance& inst,
                     const std::map<NodeId, int>& assignment) {
  auto color = [&](int index) {
    auto it = assignment.find(inst.vms[static_cast<std::size_t>(index)]);
    return it == assignment.end() ? 0 : it->second;
  };
  for (const auto& [a, b] : inst.adjacency) {
    const int ca = color(a);
    if (ca != 0 && ca == color(b)) return false;
  }
  return true;
}

namespace {

// Depth-first exhaustive search from a fixed prefix. Choices are explored
// none-first then ascending backup index, so within a subtree the first
// optimum found is the lexicographically smallest; replacement is on
// strictly-greater value only.
void bruteforce_from(const Tableau& tab, std::vector<int>& choice, int depth,
                     double value, double& best_value,
                     std::vector<int>& best_choice) {
  if (depth == tab.n) {
    if (value > best_value) {
      best_value = value;
      best_choice = choice;
    }
    return;
  }
  for (int c = 0; c <= tab.k; ++c) {
    if (c > 0) {
      bool conflict = false;
      for (int j : tab.prior[depth]) {
        if (choice[j] == c) {
          conflict = true;
          break;
        }
      }
      if (conflict) continue;
    }
    choice[depth] = c;
    bruteforce_from(tab, choice, depth + 1,
                    c > 0 ? value + tab.nets[depth][c - 1] : value, best_value,
                    best_choice);
    choice[depth] = 0;
  }
}

}  // namespace

DiversityAssignment solve_bruteforce(const OdapInstance& inst, ExecMode mode,
                                     double bound) {
  const Tableau tab(inst);
  const double space = std::pow(static_cast<double>(tab.k + 1), tab.n);
  if (space > bound)
    throw AnalysisError("instance exceeds brute-force bound: (" +
                        std::to_string(tab.k + 1) + ")^" + std::to_string(tab.n) +
                        " assignments");

  if (tab.n == 0) return pack(inst, {}, inst.objective_offset);

  // Split the search by assignment prefix; each prefix subtree is searched
  // serially and the per-prefix optima are folded in prefix (lexicographic)
  // order, so the result does not depend on the thread count.
  int prefix_depth = 0;
  if (mode == ExecMode::kParallel) {
    const int want = std::max(8 * max_threads(), 16);
    double prefixes = 1.0;
    while (prefix_depth < tab.n && prefixes < want) {
      prefixes *= tab.k + 1;
      ++prefix_depth;
    }
  }

  std::vector<std::vector<int>> prefixes;
  {
    std::vector<int> partial(static_cast<std::size_t>(tab.n), 0);
    std::function<void(int)> gen = [&](int depth) {
      if (depth == prefix_depth) {
        prefixes.emplace_back(partial.begin(), partial.begin() + prefix_depth);
        return;
      }
      for (int c = 0; c <= tab.k; ++c) {
        if (c > 0) {
          bool conflict = false;
          for (int j : tab.prior[depth]) {
            if (j < depth && partial[static_cast<std::size_t>(j)] == c) {
              conflict = true;
              break;
            }
          }
          if (conflict) continue;
        }
        partial[static_cast<std::size_t>(depth)] = c;
        gen(depth + 1);
        partial[static_cast<std::size_t>(depth)] = 0;
      }
    };
    gen(0);
  }

  const double lowest = -std::numeric_limits<double>::infinity();
  std::vector<double> values(prefixes.size(), lowest);
  std::vector<std::vector<int>> winners(prefixes.size());

  const auto total = static_cast<std::int64_t>(prefixes.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (mode == ExecMode::kParallel)
#endif
  for (std::int64_t p = 0; p < total; ++p) {
    std::vector<int> choice(static_cast<std::size_t>(tab.n), 0);
    double value = inst.objective_offset;
    for (int d = 0; d < prefix_depth; ++d) {
      const int c = prefixes[static_cast<std::size_t>(p)][static_cast<std::size_t>(d)];
      choice[static_cast<std::size_t>(d)] = c;
      if (c > 0) value += tab.nets[d][c - 1];
    }
    double best_value = lowest;
    std::vector<int> best_choice;
    bruteforce_from(tab, choice, prefix_depth, value, best_value, best_choice);
    values[static_cast<std::size_t>(p)] = best_value;
    winners[static_cast<std::size_t>(p)] = std::move(best_choice);
  }

  std::size_t at = 0;
  for (std::size_t p = 1; p < prefixes.size(); ++p) {
    if (values[p] > values[at]) at = p;
  }
  return pack(inst, winners[at], values[at]);
}

DiversityAssignment solve_exact(const OdapInstance& inst) {
  const Tableau tab(inst);
  if (tab.n == 0) return pack(inst, {}, inst.objective_offset);

  // Branch order: descending occurrence, ascending id on ties.
  std::vector<int> order(static_cast<std::size_t>(tab.n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto oa = inst.occurrence.at(inst.vms[static_cast<std::size_t>(a)]);
    const auto ob = inst.occurrence.at(inst.vms[static_cast<std::size_t>(b)]);
    if (oa != ob) return oa > ob;
    return inst.vms[static_cast<std::size_t>(a)] < inst.vms[static_cast<std::size_t>(b)];
  });

  // Optimistic completion: the best unconstrained net (floored at "assign
  // nothing") of every VM still to be branched.
  std::vector<double> suffix(static_cast<std::size_t>(tab.n) + 1, 0.0);
  for (int pos = tab.n - 1; pos >= 0; --pos) {
    const int i = order[static_cast<std::size_t>(pos)];
    double best = 0.0;
    for (int c = 1; c <= tab.k; ++c) best = std::max(best, tab.nets[i][c - 1]);
    suffix[static_cast<std::size_t>(pos)] = suffix[static_cast<std::size_t>(pos) + 1] + best;
  }

  std::vector<int> choice(static_cast<std::size_t>(tab.n), 0);
  std::vector<int> best_choice(static_cast<std::size_t>(tab.n), 0);
  double best_value = tab.canonical_value(inst, best_choice);  // all-none start

  // Equal-value subtrees survive pruning (strict inequality with a relative
  // slack for summation-order rounding), so the lexicographic tie-break is
  // applied to every optimum and the result matches solve_bruteforce.
  std::function<void(int, double)> branch = [&](int pos, double value) {
    if (pos == tab.n) {
      const double canonical = tab.canonical_value(inst, choice);
      if (canonical > best_value ||
          (canonical == best_value && choice < best_choice)) {
        best_value = canonical;
        best_choice = choice;
      }
      return;
    }
    const double slack =
        1e-9 * (1.0 + std::abs(best_value)) + 1e-12 * std::abs(value);
    if (value + suffix[static_cast<std::size_t>(pos)] < best_value - slack) return;

    const int i = order[static_cast<std::size_t>(pos)];
    for (int c = 0; c <= tab.k; ++c) {
      if (c > 0) {
        bool conflict = false;
        for (int j : tab.neighbors[i]) {
          if (choice[static_cast<std::size_t>(j)] == c) {
            conflict = true;
            break;
          }
        }
        if (conflict) continue;
      }
      choice[static_cast<std::size_t>(i)] = c;
      branch(pos + 1, c > 0 ? value + tab.nets[i][c - 1] : value);
      choice[static_cast<std::size_t>(i)] = 0;
    }
  };
  branch(0, inst.objective_offset);

  return pack(inst, best_choice, best_value);
}

std::string export_model(const OdapInstance& inst) {
  const int k = static_cast<int>(inst.backups.size());
  std::ostringstream out;

  out << "Maximize\n";
  out << "  (" << fixed1(inst.objective_offset);
  for (std::size_t i = 0; i < inst.vms.size(); ++i) {
    for (int c = 1; c <= k; ++c) {
      // d-coefficient: everything the assignment gains before the e-term.
      const NodeId id = inst.vms[i];
      const BackupOs& backup = inst.backups[static_cast<std::size_t>(c - 1)];
      const double occ = static_cast<double>(inst.occurrence.at(id));
      const double aro = inst.aro.at(id);
      double coeff;
      if (inst.convention == OdapConvention::kPaperLiteral) {
        coeff = occ * backup.asset_value * backup.exposure_factor * aro -
                backup.cost_of_security;
      } else {
        coeff = occ * (inst.sle.at(id) -
                       backup.asset_value * backup.exposure_factor) *
                    aro -
                backup.cost_of_security;
      }
      out << "\n  + " << fixed1(coeff) << " d" << id << "," << c;
    }
  }
  if (inst.convention == OdapConvention::kPaperLiteral) {
    for (NodeId id : inst.vms) {
      const double coeff = -static_cast<double>(inst.occurrence.at(id)) *
                           inst.sle.at(id) * inst.aro.at(id);
      out << "\n  + " << fixed1(coeff) << " e" << id;
    }
  }
  for (const auto& [a, b] : inst.adjacency) {
    out << "\n  + " << fixed1(-inst.big_m) << " f"
        << inst.vms[static_cast<std::size_t>(a)] << ","
        << inst.vms[static_cast<std::size_t>(b)];
  }
  out << ")\n\n";

  out << "Subject To\n";
  for (int c = 1; c <= k; ++c) {
    for (const auto& [a, b] : inst.adjacency) {
      const NodeId i = inst.vms[static_cast<std::size_t>(a)];
      const NodeId j = inst.vms[static_cast<std::size_t>(b)];
      out << "  -1.0 d" << i << "," << c << " + -1.0 d" << j << "," << c
          << " + f" << i << "," << j << " >= -1.0\n";
    }
  }
  for (NodeId id : inst.vms) {
    out << "  ";
    for (int c = 1; c <= k; ++c) {
      if (c > 1) out << " + ";
      out << "d" << id << "," << c;
    }
    out << " = e" << id << "\n";
  }
  out << "\n";

  out << "Binaries\n  ";
  bool first = true;
  for (NodeId id : inst.vms) {
    for (int c = 0; c <= k; ++c) {
      if (!first) out << ", ";
      out << "d" << id << "," << c;
      first = false;
    }
  }
  for (NodeId id : inst.vms) out << ", e" << id;
  for (const auto& [a, b] : inst.adjacency)
    out << ", f" << inst.vms[static_cast<std::size_t>(a)] << ","
        << inst.vms[static_cast<std::size_t>(b)];
  out << "\n";
  return out.str();
}

void export_model(const OdapInstance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model: " + path.string());
  out << export_model(inst);
  if (!out) throw IoError("cannot write model: " + path.string());
}

std::string assignment_to_json(const OdapInstance& inst,
                               const DiversityAssignment& solution) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json assignment;
  for (NodeId id : inst.vms) {
    auto it = solution.assignment.find(id);
    const int c = it == solution.assignment.end() ? 0 : it->second;
    if (c == 0)
      assignment[std::to_string(id)] = nullptr;
    else
      assignment[std::to_string(id)] = c;
  }
  doc["assignment"] = std::move(assignment);
  doc["enb"] = solution.enb;
  doc["convention"] = inst.convention == OdapConvention::kPaperLiteral
                          ? "paper-literal"
                          : "benefit";
  return doc.dump(2) + "\n";
}

}  // namespace mtdbench
