#pragma once

#include "segqa/grid.hpp"

namespace segqa {

/// Exact Euclidean distance transform: per-voxel distance in mm from the
/// voxel center to the nearest target voxel center, honoring the per-axis
/// spacing of the target's grid. Zero exactly on target voxels.
///
/// Separable lower-envelope method (one linear pass along x, then a
/// parabolic envelope pass along y and z), exact up to floating rounding
/// and O(n) per axis.
///
/// Throws EmptyTarget if the target mask has no foreground voxel.
ScalarVolume edt(const BinaryMask& target);

} // namespace segqa
