#pragma once

#include <string>

namespace segqa {

/// Thresholds crossing the review score with segmentation quality.
/// doubt_threshold has no default on purpose: it is chosen by the reviewer.
struct TriageConfig {
    double doubt_threshold = 0.0;
    double dice_threshold = 0.75;
};

/// Quadrants of the (doubt, dice) plane. "Positive" means flagged for
/// review; "True" means the flag agrees with actual quality (dice below
/// the quality threshold).
enum class Quadrant { TruePositive, FalsePositive, FalseNegative, TrueNegative };

const char* to_string(Quadrant q);

/// True iff the score is strictly above the threshold. The empty-segmentation
/// sentinel (+inf) always flags.
bool flag(double doubt, const TriageConfig& cfg);

/// Quadrant of a case given its doubt score and dice. Boundary convention:
/// dice exactly at the threshold counts as good.
Quadrant quadrant_of(double doubt, double dice, const TriageConfig& cfg);

} // namespace segqa
