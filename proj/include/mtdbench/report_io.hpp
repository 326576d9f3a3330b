#pragma once

#include <string>

#include "mtdbench/economic_metrics.hpp"
#include "mtdbench/security_metrics.hpp"

namespace mtdbench {

// Stable text renderings of the analysis reports. Numbers use fixed
// formatting ('.' decimal separator, no grouping, LF endings) so repeated
// runs are byte-identical.
struct AnalysisOutput {
  SecurityReport security;
  EconomicReport economic;
  std::string risk_note;  // provenance of risk_total
  bool with_reliability = false;
  ReliabilityCurve reliability;
};

std::string analysis_to_json(const AnalysisOutput& out);
std::string analysis_to_csv(const AnalysisOutput& out);

// Fixed-point decimal with the given number of fractional digits.
std::string format_fixed(double value, int digits);

}  // namespace mtdbench
