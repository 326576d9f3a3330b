#include "mtdbench/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace mtdbench {

namespace {

using json = nlohmann::ordered_json;

double round_to(double value, int digits) {
  const double scale = std::pow(10.0, digits);
  const double rounded = std::round(value * scale) / scale;
  return rounded == 0.0 ? 0.0 : rounded;  // avoid -0
}

const char* sle_mode_name(SleMode mode) {
  return mode == SleMode::kMaxEf ? "max-ef" : "compound";
}

}  // namespace

std::string format_fixed(double value, int digits) {
  if (value == 0.0) value = 0.0;  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

std::string analysis_to_json(const AnalysisOutput& out) {
  json doc;

  json security;
  security["risk_total"] = round_to(out.security.risk_total, 4);
  security["attack_cost_total"] = round_to(out.security.attack_cost_total, 4);
  security["roa_total"] = round_to(out.security.roa_total, 4);
  security["path_count"] = out.security.path_count;
  security["truncated"] = out.security.truncated;
  security["risk_total_note"] = out.risk_note;
  json per_vm;
  for (const auto& [id, entry] : out.security.per_vm) {
    json row;
    row["risk"] = round_to(entry.risk, 4);
    row["ac"] = round_to(entry.ac, 4);
    row["roa"] = round_to(entry.roa, 4);
    per_vm["vm" + std::to_string(id)] = std::move(row);
  }
  security["per_vm"] = std::move(per_vm);
  doc["security"] = std::move(security);

  json economic;
  economic["sle_mode"] = sle_mode_name(out.economic.sle_mode);
  economic["ale_total"] = round_to(out.economic.ale_total, 2);
  economic["truncated"] = out.economic.truncated;
  json sle;
  for (const auto& [id, value] : out.economic.sle_per_vm)
    sle["vm" + std::to_string(id)] = round_to(value, 2);
  economic["sle_per_vm"] = std::move(sle);
  doc["economic"] = std::move(economic);

  if (out.with_reliability) {
    json rel;
    rel["rate"] = out.reliability.rate;
    rel["horizon"] = out.reliability.horizon;
    rel["stages"] = out.reliability.stages;
    json samples = json::array();
    for (const auto& [t, r] : out.reliability.samples)
      samples.push_back(json::array({round_to(t, 4), round_to(r, 6)}));
    rel["samples"] = std::move(samples);
    doc["reliability"] = std::move(rel);
  }
  return doc.dump(2) + "\n";
}

std::string analysis_to_csv(const AnalysisOutput& out) {
  std::ostringstream csv;
  csv << "metric,value\n";
  csv << "risk_total," << format_fixed(out.security.risk_total, 4) << '\n';
  csv << "attack_cost_total," << format_fixed(out.security.attack_cost_total, 4)
      << '\n';
  csv << "roa_total," << format_fixed(out.security.roa_total, 4) << '\n';
  csv << "path_count," << out.security.path_count << '\n';
  csv << "truncated," << (out.security.truncated ? "true" : "false") << '\n';
  csv << "risk_total_note," << out.risk_note << '\n';
  csv << "sle_mode," << sle_mode_name(out.economic.sle_mode) << '\n';
  csv << "ale_total," << format_fixed(out.economic.ale_total, 2) << '\n';
  for (const auto& [id, entry] : out.security.per_vm) {
    csv << "risk_vm" << id << ',' << format_fixed(entry.risk, 4) << '\n';
    csv << "ac_vm" << id << ',' << format_fixed(entry.ac, 4) << '\n';
    csv << "roa_vm" << id << ',' << format_fixed(entry.roa, 4) << '\n';
  }
  for (const auto& [id, value] : out.economic.sle_per_vm)
    csv << "sle_vm" << id << ',' << format_fixed(value, 2) << '\n';
  if (out.with_reliability) {
    csv << "reliability_stages," << out.reliability.stages << '\n';
    for (const auto& [t, r] : out.reliability.samples)
      csv << "reliability_t" << format_fixed(t, 2) << ','
          << format_fixed(r, 6) << '\n';
  }
  return csv.str();
}

}  // namespace mtdbench
