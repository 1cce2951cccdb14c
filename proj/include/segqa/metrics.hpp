#pragma once

#include "segqa/grid.hpp"

namespace segqa {

struct MetricSet {
    double dice = 0.0;
    double hd95_mm = 0.0;
    double volume_similarity = 0.0;
};

/// Dice overlap 2|A∩B| / (|A|+|B|). Two empty masks compare as 1.0.
double dice(const BinaryMask& pred, const BinaryMask& gt);

/// 95th percentile of the pooled symmetric surface distances between the two
/// mask outlines, in mm. Percentile by linear interpolation between order
/// statistics. Throws EmptyMask when either mask has no surface (empty, or
/// covering the whole grid).
double hd95(const BinaryMask& pred, const BinaryMask& gt);

/// Volume agreement irrespective of overlap: 1 - ||A|-|B|| / (|A|+|B|).
/// Two empty masks compare as 1.0.
double volume_similarity(const BinaryMask& pred, const BinaryMask& gt);

/// All three metrics at once.
MetricSet evaluate_metrics(const BinaryMask& pred, const BinaryMask& gt);

/// Percentile (0..100) of an unsorted sample by linear interpolation between
/// order statistics; exposed for tests.
double percentile(std::vector<double> values, double pct);

} // namespace segqa
