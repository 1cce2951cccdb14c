#pragma once

#include <array>
#include <span>

#include "segqa/grid.hpp"

namespace segqa {

/// Neighbor offset table for a connectivity. Faces6 = the 6 face neighbors,
/// Edges18 adds the 12 edge neighbors, Full26 the 8 corners as well.
std::span<const std::array<int, 3>> neighbor_offsets(Connectivity conn);

/// Inner boundary of a mask: foreground voxels with at least one background
/// neighbor under `conn`. Neighbors outside the grid are treated as absent,
/// not as background, so a solid block touching the volume border has no
/// outline there.
BinaryMask outline(const BinaryMask& mask, Connectivity conn = Connectivity::Faces6);

/// Grow the mask: each iteration adds every voxel with a foreground neighbor
/// under `conn`. Clipped at the grid bounds.
BinaryMask dilate(const BinaryMask& mask, Connectivity conn, int iterations);

/// Elementwise complement (1 - m).
BinaryMask invert(const BinaryMask& mask);

/// Voxelwise strict comparison: 1 iff value > tau.
BinaryMask threshold(const ScalarVolume& vol, double tau);

/// Voxelwise AND of two masks of identical shape.
BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b);

} // namespace segqa
