// Brute-force reference implementations used to pin expected values in the
// unit and acceptance suites. Deliberately written as literal definitions
// (full neighbor scans, all-pairs distance searches) and kept independent of
// the library's algorithmic paths.
#pragma once

#include <cstdint>
#include <vector>

#include "segqa/doubt.hpp"
#include "segqa/grid.hpp"
#include "segqa/rng.hpp"

namespace oracle {

using segqa::BinaryMask;
using segqa::Connectivity;
using segqa::GridShape;
using segqa::ScalarVolume;

/// Foreground voxels with an in-grid background neighbor (direct scan).
BinaryMask outline(const BinaryMask& mask, Connectivity conn);

/// One neighbor-scan growth step, applied `iterations` times.
BinaryMask dilate(const BinaryMask& mask, Connectivity conn, int iterations);

/// Distance to the nearest target voxel by scanning every target voxel.
ScalarVolume edt(const BinaryMask& target);

/// Dice / volume similarity from exact integer counts (long double ratio).
long double dice(const BinaryMask& a, const BinaryMask& b);
long double volume_similarity(const BinaryMask& a, const BinaryMask& b);

/// Pooled 95th-percentile surface distance, surfaces and distances brute force.
double hd95(const BinaryMask& pred, const BinaryMask& gt);

/// Literal mask construction + distance weighting + sum:
/// dilate(outline) twice -> invert -> entropy gate, weights via brute edt.
double doubt_score(const ScalarVolume& entropy, const BinaryMask& seg,
                   const segqa::DoubtConfig& cfg = {});

/// Random test-case helpers (keyed, deterministic).
BinaryMask random_mask(const GridShape& shape, std::uint64_t key, double density);
/// Mask guaranteed nonempty and not grid-filling.
BinaryMask random_proper_mask(const GridShape& shape, std::uint64_t key, double density);
ScalarVolume random_volume(const GridShape& shape, std::uint64_t key, double lo, double hi);
/// Random blob-like mask (thresholded smooth noise), nonempty, not full.
BinaryMask random_blob(const GridShape& shape, std::uint64_t key);

} // namespace oracle
