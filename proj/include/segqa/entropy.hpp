#pragma once

#include "segqa/grid.hpp"

namespace segqa {

enum class LogBase { Natural, Base2 };

inline const char* to_string(LogBase b) { return b == LogBase::Natural ? "natural" : "base2"; }

struct EntropyConfig {
    LogBase log_base = LogBase::Natural;
};

/// Voxelwise entropy of the fused binary class distribution (p, 1-p):
///   h = -[p log p + (1-p) log(1-p)]     with 0 log 0 := 0.
/// Range [0, log 2] in the configured base; clamped there against rounding.
ScalarVolume predictive_entropy(const ScalarVolume& prob, const EntropyConfig& cfg = {});

/// Scalar form of the same map, used by tests and tools.
double binary_entropy(double p, LogBase base = LogBase::Natural);

} // namespace segqa
