#pragma once

#include <cstdint>
#include <limits>

#include "segqa/grid.hpp"

namespace segqa {

/// Policy when the segmentation has no outline (empty prediction, or a mask
/// covering the whole grid): the distance weight is undefined there.
enum class EmptySegPolicy {
    SentinelMax, // report the sentinel score (+inf): case is always flagged
    Error        // throw EmptySegmentation
};

struct DoubtConfig {
    double entropy_threshold = 0.5;
    int dilation_iterations = 2;
    Connectivity connectivity = Connectivity::Faces6;
    EmptySegPolicy empty_segmentation_policy = EmptySegPolicy::SentinelMax;
};

/// Scalar review score plus the pieces that explain it.
struct DoubtBreakdown {
    double dbt = 0.0;
    std::int64_t masked_voxel_count = 0;
    double max_weighted_term = 0.0;
    std::int64_t outline_voxel_count = 0;

    /// Sentinel for the empty-segmentation policy: compares above every
    /// finite score, so the case ranks first and is always flagged.
    static constexpr double sentinel() { return std::numeric_limits<double>::infinity(); }
    bool is_sentinel() const { return std::isinf(dbt); }
};

/// The binary mask k of the score: high-entropy voxels away from the
/// segmentation boundary band. Built as
///   invert(dilate(outline(seg), conn, iterations)) AND (entropy > threshold).
/// An empty segmentation has an empty band, so k degenerates to the entropy
/// threshold alone.
BinaryMask exclusion_mask(const BinaryMask& seg, const ScalarVolume& entropy,
                          const DoubtConfig& cfg = {});

/// The distance weight w: Euclidean distance (mm) from every voxel to the
/// segmentation outline. Zero on the outline, positive elsewhere.
/// Throws EmptySegmentation if the outline is empty.
ScalarVolume distance_weight(const BinaryMask& seg, Connectivity conn = Connectivity::Faces6);

/// The review score: dbt = sum_i k_i * w_i * h_i over all voxels, with the
/// breakdown fields filled in. Summation order is fixed (linear scan), so
/// the result is deterministic. Empty segmentations follow
/// cfg.empty_segmentation_policy.
DoubtBreakdown doubt_score(const ScalarVolume& entropy, const BinaryMask& seg,
                           const DoubtConfig& cfg = {});

} // namespace segqa
