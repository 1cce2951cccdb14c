#pragma once

#include <array>
#include <span>
#include <vector>

#include "segqa/grid.hpp"

namespace segqa {

/// Raw stochastic predictions for one case: T probability volumes per
/// anatomical plane. Samples are f32 payloads (the on-disk dtype); all
/// reductions over them accumulate in double.
struct McSampleSet {
    std::array<std::vector<SampleVolume>, 3> planes;

    std::vector<SampleVolume>& samples(Plane p) { return planes[static_cast<int>(p)]; }
    const std::vector<SampleVolume>& samples(Plane p) const { return planes[static_cast<int>(p)]; }

    /// Shape shared by every sample; throws if the set is empty or inconsistent.
    const GridShape& shape() const;
    int sample_count() const;

    /// Checks T >= 1 and equal across planes, uniform shapes, values in [0,1].
    void validate() const;
};

/// Shift/scale a volume to zero mean and unit population standard deviation.
/// Throws ConstantVolume when the input has no spread.
ScalarVolume zscore_normalize(const ScalarVolume& vol);

/// Voxelwise mean of T probability samples. Sums are exact in double for
/// f32 inputs (T < 2^29), so the result is bitwise independent of sample
/// order. Throws EmptySampleList / ShapeMismatch.
ScalarVolume mc_mean(std::span<const SampleVolume> samples);

/// Voxelwise mean of the three per-plane predictions, computed in deviation
/// form so that plane_average(v, v, v) == v bitwise; result clamped to [0,1].
ScalarVolume plane_average(const ScalarVolume& axial, const ScalarVolume& coronal,
                           const ScalarVolume& sagittal);

/// Binary decision from fused foreground probability: foreground iff
/// p >= 0.5 (ties go to foreground).
BinaryMask classify(const ScalarVolume& prob);

/// Full fusion: per-plane MC mean, then plane average.
ScalarVolume fuse_probability(const McSampleSet& set);

} // namespace segqa
