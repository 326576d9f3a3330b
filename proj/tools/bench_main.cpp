// Timing harness comparing the serial reference kernels against the OpenMP
// ones: O-DAP brute force, all-VM betweenness and the per-VM sweep loop.

#include <chrono>
#include <cstdio>
#include <string>

#include "mtdbench/graph_analysis.hpp"
#include "mtdbench/odap.hpp"
#include "mtdbench/parallel.hpp"
#include "mtdbench/scenario.hpp"
#include "mtdbench/transforms.hpp"

namespace {

using namespace mtdbench;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename Fn>
double timed(Fn&& fn) {
  const auto start = Clock::now();
  fn();
  return seconds_since(start);
}

void row(const std::string& name, double serial_s, double parallel_s,
         bool match) {
  std::printf("%-34s %10.3fs %10.3fs %8.2fx   %s\n", name.c_str(), serial_s,
              parallel_s, parallel_s > 0.0 ? serial_s / parallel_s : 0.0,
              match ? "outputs match" : "OUTPUT MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap_from_env();
  const bool quick = argc > 1 && std::string(argv[1]) == "--quick";

  std::printf("threads: %d\n", max_threads());
  std::printf("%-34s %11s %11s %9s\n", "kernel", "serial", "parallel",
              "speedup");

  {
    const Harm harm = build_harm(ehealth_scenario());
    OdapInstance instance = build_instance(harm, ehealth_scenario().backups,
                                           OdapConvention::kBenefit);
    DiversityAssignment serial_out, parallel_out;
    const double ts = timed([&] {
      serial_out = solve_bruteforce(instance, ExecMode::kSerial);
    });
    const double tp = timed([&] {
      parallel_out = solve_bruteforce(instance, ExecMode::kParallel);
    });
    row("odap brute force (8^9)", ts, tp,
        serial_out.enb == parallel_out.enb &&
            serial_out.assignment == parallel_out.assignment);
  }

  {
    const int per_band = quick ? 40 : 400;
    const Harm harm =
        build_harm(cloudband_generator(per_band, 2, 3, /*seed=*/7));
    std::map<NodeId, double> serial_out, parallel_out;
    const double ts = timed(
        [&] { serial_out = betweenness_all(harm, false, ExecMode::kSerial); });
    const double tp = timed(
        [&] { parallel_out = betweenness_all(harm, false, ExecMode::kParallel); });
    row("betweenness (" + std::to_string(2 * per_band) + " VMs)", ts, tp,
        serial_out == parallel_out);
  }

  {
    const Harm harm = build_harm(cloudband_generator(quick ? 10 : 30, 2, 3, 7));
    EvalOptions serial_opts, parallel_opts;
    serial_opts.exec = ExecMode::kSerial;
    parallel_opts.exec = ExecMode::kParallel;
    SweepTable serial_out, parallel_out;
    const double ts =
        timed([&] { serial_out = sweep_shuffle(harm, serial_opts); });
    const double tp =
        timed([&] { parallel_out = sweep_shuffle(harm, parallel_opts); });
    row("shuffle sweep", ts, tp,
        sweep_to_csv(serial_out) == sweep_to_csv(parallel_out));
  }

  return 0;
}
