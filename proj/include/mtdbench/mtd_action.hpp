#pragma once

#include <optional>

#include "mtdbench/harm.hpp"

namespace mtdbench {

enum class MtdKind { kShuffle, kDiversity, kRedundancy };

// One applied MTD operation. `variant` accompanies Diversity, `replicas`
// accompanies Redundancy; neither appears on the other kinds.
struct MtdAction {
  MtdKind kind = MtdKind::kShuffle;
  NodeId vm = 0;
  std::optional<BackupOs> variant;
  std::optional<int> replicas;
};

}  // namespace mtdbench
