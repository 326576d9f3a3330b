// mtdbench command line: baseline analysis, MTD sweeps, optimal diversity
// assignment and scenario generation over HARM scenario files.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mtdbench/economic_metrics.hpp"
#include "mtdbench/errors.hpp"
#include "mtdbench/graph_analysis.hpp"
#include "mtdbench/harm.hpp"
#include "mtdbench/odap.hpp"
#include "mtdbench/parallel.hpp"
#include "mtdbench/report_io.hpp"
#include "mtdbench/scenario.hpp"
#include "mtdbench/security_metrics.hpp"
#include "mtdbench/transforms.hpp"

namespace {

using namespace mtdbench;

// Single-shot output: stage into memory, then one atomic write (temp file +
// rename) or one stdout flush.
void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(out_path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write output: " + out_path);
    out << text;
    if (!out) throw IoError("cannot write output: " + out_path);
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot write output: " + out_path + " (" + ec.message() + ")");
}

struct CommonOptions {
  std::string scenario_path;
  std::string sle_mode = "max-ef";
  std::string out_path;
  double aro_override = -1.0;  // < 0 means keep scenario values
  std::int64_t max_paths = 0;  // 0 = default policy
  int max_len = 0;
};

SleMode parse_sle_mode(const std::string& name) {
  return name == "compound" ? SleMode::kCompound : SleMode::kMaxEf;
}

Harm load_harm(const CommonOptions& common, ScenarioDescription* out_scenario) {
  ScenarioDescription scenario = load_scenario(common.scenario_path);
  if (common.aro_override >= 0.0) {
    for (VmNode& vm : scenario.vms) vm.aro = common.aro_override;
  }
  if (out_scenario) *out_scenario = scenario;
  return build_harm(scenario);
}

PathBounds bounds_for(const CommonOptions& common, const Harm& harm) {
  PathBounds bounds;
  if (common.max_paths > 0) bounds.max_paths = common.max_paths;
  if (common.max_len > 0) {
    bounds.max_len = common.max_len;
  } else if (harm.vms.size() > 12) {
    // Large generated scenarios default to a length cap of the VM count;
    // explicit flags override.
    bounds.max_len = static_cast<int>(harm.vms.size());
  }
  return bounds;
}

int run_analyze(const CommonOptions& common, const std::string& format,
                bool with_reliability, double rate, double horizon, double step,
                int redundancy_r) {
  const Harm harm = load_harm(common, nullptr);
  const auto violations = validate(harm);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << "invalid scenario: " << v << "\n";
    return 1;
  }
  const PathBounds bounds = bounds_for(common, harm);
  const AttackPathSet paths = enumerate_attack_paths(harm, bounds);

  AnalysisOutput out;
  out.security = security_report(harm, paths);
  out.economic = economic_report(harm, paths, parse_sle_mode(common.sle_mode));
  {
    std::ostringstream note;
    note << "sum of per-path risk over " << paths.paths.size()
         << " enumerated attack paths; equals the per-vm risk x occurrence "
            "closed form on acyclic models";
    if (paths.truncated) note << "; truncated path set: totals are lower bounds";
    out.risk_note = note.str();
  }
  if (with_reliability) {
    out.with_reliability = true;
    out.reliability = reliability(harm, rate, horizon, step, redundancy_r);
  }
  emit(format == "csv" ? analysis_to_csv(out) : analysis_to_json(out),
       common.out_path);
  return 0;
}

int run_sweep(const CommonOptions& common, const std::string& kind,
              const std::string& variant_os, double variant_av,
              double variant_cost) {
  ScenarioDescription scenario;
  const Harm harm = load_harm(common, &scenario);
  EvalOptions opts;
  opts.sle_mode = parse_sle_mode(common.sle_mode);
  opts.bounds = bounds_for(common, harm);

  SweepTable table;
  if (kind == "shuffle") {
    table = sweep_shuffle(harm, opts);
  } else {
    const BackupOs variant =
        make_variant_from_catalog(scenario, variant_os, variant_av, variant_cost);
    table = sweep_diversity(harm, variant, opts);
  }
  emit(sweep_to_csv(table), common.out_path);
  return 0;
}

int run_odap(const CommonOptions& common, const std::string& action,
             const std::string& convention, double big_m, double offset,
             double bound) {
  const Harm harm = load_harm(common, nullptr);
  const OdapConvention conv = convention == "paper-literal"
                                  ? OdapConvention::kPaperLiteral
                                  : OdapConvention::kBenefit;
  ScenarioDescription scenario = load_scenario(common.scenario_path);
  OdapInstance instance =
      build_instance(harm, scenario.backups, conv, parse_sle_mode(common.sle_mode));
  instance.big_m = big_m;
  instance.objective_offset = offset;

  if (action == "export") {
    emit(export_model(instance), common.out_path);
    return 0;
  }
  const DiversityAssignment solution =
      action == "oracle" ? solve_bruteforce(instance, ExecMode::kParallel, bound)
                         : solve_exact(instance);
  emit(assignment_to_json(instance, solution), common.out_path);
  return 0;
}

int run_curve(const CommonOptions& common, const std::string& strategy_name,
              int x, const std::string& variant_os, double variant_av,
              double variant_cost, std::uint64_t seed) {
  ScenarioDescription scenario;
  const Harm harm = load_harm(common, &scenario);
  EvalOptions opts;
  opts.sle_mode = parse_sle_mode(common.sle_mode);
  opts.bounds = bounds_for(common, harm);
  const SelectionStrategy strategy = strategy_name == "cvs"
                                         ? SelectionStrategy::kCvs
                                         : strategy_name == "rvs"
                                               ? SelectionStrategy::kRvs
                                               : SelectionStrategy::kBvs;
  const BackupOs variant =
      make_variant_from_catalog(scenario, variant_os, variant_av, variant_cost);
  const TransformReport report =
      multi_diversity(harm, strategy, x, {variant}, seed, opts);

  std::ostringstream csv;
  csv << "x,risk,ac,roa,ale,cs,rosi\n";
  for (const CurvePoint& point : report.curve) {
    csv << point.x << ',' << format_fixed(point.risk, 4) << ','
        << format_fixed(point.ac, 4) << ',' << format_fixed(point.roa, 4) << ','
        << format_fixed(point.ale, 2) << ',' << format_fixed(point.cs, 2) << ','
        << format_fixed(point.rosi, 4) << '\n';
  }
  emit(csv.str(), common.out_path);
  return 0;
}

int run_generate(int n_per_band, int bands, int degree, std::uint64_t seed,
                 const std::string& out_path) {
  const ScenarioDescription scenario =
      cloudband_generator(n_per_band, bands, degree, seed);
  const Harm harm = build_harm(scenario);
  const auto violations = validate(harm);
  if (!violations.empty()) {
    for (const auto& v : violations)
      std::cerr << "generator produced invalid scenario: " << v << "\n";
    return 1;
  }
  emit(scenario_to_json(scenario), out_path);
  return 0;
}

// Mirrors flags from a JSON config file: every key becomes --key=value
// unless the flag is already present on the command line.
std::vector<std::string> apply_config(std::vector<std::string> args) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (config_path.empty()) return args;

  std::ifstream in(config_path);
  if (!in) throw IoError("config not found: " + config_path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("config is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw IoError("config must be a JSON object");

  for (const auto& [key, value] : doc.items()) {
    const std::string flag = "--" + key;
    const bool present =
        std::any_of(args.begin(), args.end(), [&flag](const std::string& arg) {
          return arg == flag || arg.rfind(flag + "=", 0) == 0;
        });
    if (present) continue;
    std::string rendered;
    if (value.is_string())
      rendered = value.get<std::string>();
    else
      rendered = value.dump();
    args.push_back(flag + "=" + rendered);
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap_from_env();

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = apply_config(args);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"HARM-based security and economic analysis of MTD techniques"};
  app.require_subcommand(1);

  CommonOptions common;
  auto add_common = [&common](CLI::App* cmd, bool with_sle = true) {
    cmd->add_option("--scenario", common.scenario_path, "Scenario JSON file")
        ->required();
    cmd->add_option("--out", common.out_path, "Write output to this file");
    cmd->add_option("--max-paths", common.max_paths,
                    "Stop path enumeration after this many paths");
    cmd->add_option("--max-len", common.max_len,
                    "Maximum VMs per enumerated path");
    if (with_sle) {
      cmd->add_option("--sle-mode", common.sle_mode,
                      "SLE combination: max-ef or compound")
          ->check(CLI::IsMember({"max-ef", "compound"}));
      cmd->add_option("--aro", common.aro_override,
                      "Override every VM's annualized rate of occurrence");
    }
  };

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Baseline security + economic report");
  std::string format = "json";
  bool with_reliability = false;
  double rate = 0.2, horizon = 10.0, step = 1.0;
  int redundancy_r = 0;
  add_common(analyze);
  analyze->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  analyze->add_flag("--reliability", with_reliability,
                    "Include the attack-survival curve");
  analyze->add_option("--rate", rate, "Attack rate (attacks/hour)");
  analyze->add_option("--horizon", horizon, "Reliability horizon (hours)");
  analyze->add_option("--step", step, "Reliability sampling step (hours)");
  analyze->add_option("--redundancy", redundancy_r,
                      "Extra compromise stages from redundancy");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Per-VM transform sweep table (CSV)");
  std::string kind;
  std::string variant_os = "fedora";
  double variant_av = 450.0, variant_cost = 55.0;
  add_common(sweep);
  sweep->add_option("--kind", kind, "Transform to sweep: shuffle or diversity")
      ->required()
      ->check(CLI::IsMember({"shuffle", "diversity"}));
  sweep->add_option("--variant-os", variant_os,
                    "Diversity variant OS (from the scenario's os_catalog)");
  sweep->add_option("--variant-av", variant_av, "Diversity variant asset value");
  sweep->add_option("--variant-cost", variant_cost,
                    "Per-operation cost of the diversity variant");

  // odap
  auto* odap = app.add_subcommand(
      "odap", "Optimal diversity assignment: solve, oracle or export");
  std::string odap_action;
  std::string convention = "benefit";
  double big_m = 100000.0, offset = 0.0, brute_bound = 1e9;
  add_common(odap);
  odap->add_option("action", odap_action, "solve | export | oracle")
      ->required()
      ->check(CLI::IsMember({"solve", "export", "oracle"}));
  odap->add_option("--convention", convention,
                   "Objective convention: benefit or paper-literal")
      ->check(CLI::IsMember({"benefit", "paper-literal"}));
  odap->add_option("--big-m", big_m, "Penalty per adjacent same-backup pair");
  odap->add_option("--offset", offset, "Constant added to the objective");
  odap->add_option("--bound", brute_bound,
                   "Assignment-space limit for the oracle");

  // curve
  auto* curve = app.add_subcommand(
      "curve", "Multi-VM diversity deployment curve (CSV, one row per x)");
  std::string strategy_name = "bvs";
  int curve_x = 5;
  std::uint64_t curve_seed = 0;
  add_common(curve);
  curve->add_option("--strategy", strategy_name, "VM selection: bvs, cvs or rvs")
      ->check(CLI::IsMember({"bvs", "cvs", "rvs"}));
  curve->add_option("--x", curve_x, "Number of VMs to diversify")
      ->check(CLI::PositiveNumber);
  curve->add_option("--seed", curve_seed, "Seed for the rvs strategy");
  curve->add_option("--variant-os", variant_os,
                    "Diversity variant OS (from the scenario's os_catalog)");
  curve->add_option("--variant-av", variant_av, "Diversity variant asset value");
  curve->add_option("--variant-cost", variant_cost,
                    "Per-operation cost of the diversity variant");

  // generate
  auto* generate = app.add_subcommand("generate", "Emit a cloud-band scenario");
  int n_per_band = 75, bands = 2, degree = 3;
  std::uint64_t seed = 0;
  std::string generate_out;
  generate->add_option("--n", n_per_band, "VMs per band")
      ->required()
      ->check(CLI::PositiveNumber);
  generate->add_option("--bands", bands, "Number of bands")
      ->check(CLI::PositiveNumber);
  generate->add_option("--degree", degree, "Maximum out-degree per VM")
      ->check(CLI::PositiveNumber);
  generate->add_option("--seed", seed, "Generator seed");
  generate->add_option("--out", generate_out, "Write scenario to this file");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(analyze))
      return run_analyze(common, format, with_reliability, rate, horizon, step,
                         redundancy_r);
    if (app.got_subcommand(sweep))
      return run_sweep(common, kind, variant_os, variant_av, variant_cost);
    if (app.got_subcommand(odap))
      return run_odap(common, odap_action, convention, big_m, offset, brute_bound);
    if (app.got_subcommand(curve))
      return run_curve(common, strategy_name, curve_x, variant_os, variant_av,
                       variant_cost, curve_seed);
    if (app.got_subcommand(generate))
      return run_generate(n_per_band, bands, degree, seed, generate_out);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
