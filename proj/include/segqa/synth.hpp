#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "segqa/fusion.hpp"
#include "segqa/grid.hpp"

namespace segqa {

struct Ellipsoid {
    std::array<double, 3> center_mm{};
    std::array<double, 3> semi_axes_mm{};
};

enum class CorruptionKind { None, FarBlob, BoundaryFuzz, Undersegmentation, RegistrationShift };

const char* to_string(CorruptionKind k);

/// Failure-mode injection for a phantom case. Only the fields of the active
/// kind are read.
struct Corruption {
    CorruptionKind kind = CorruptionKind::None;

    // FarBlob: a spurious high-probability region with strong per-sample
    // disagreement, placed blob_gap_mm away from the cavity surface along
    // the grid diagonal.
    double blob_gap_mm = 10.0;
    double blob_radius_mm = 12.0;
    double blob_logit_mean = 1.0;
    double blob_logit_spread = 1.5;

    // BoundaryFuzz: extra correlated logit noise concentrated in a band around
    // the cavity boundary; fuzz_bias is the case-coherent part that actually
    // displaces the fused boundary, fuzz_sigma the per-sample disagreement.
    double fuzz_sigma = 5.0;
    double fuzz_bias = 9.0;
    double fuzz_band_mm = 4.0;

    // Undersegmentation: predictions see the boundary pulled inward by this
    // many erosion steps (one step = one minimum-spacing shell).
    int erosion_iterations = 3;

    // RegistrationShift: predictions evaluated on a grid shifted by whole
    // voxels relative to the ground truth.
    std::array<int, 3> shift_voxels{5, 0, 0};
};

/// Per-sample stochastic model: white logit noise smoothed to a correlation
/// length, mimicking coherent uncertain regions.
struct NoiseSpec {
    double logit_sigma = 0.5;
    double correlation_mm = 3.0;
};

struct PhantomSpec {
    std::uint64_t seed = 0;
    GridShape grid = GridShape::cube(64, 1.0);
    std::vector<Ellipsoid> cavity; // empty = single centered default cavity
    Corruption corruption;
    NoiseSpec noise;
    double logistic_scale_mm = 0.5; // sharpness of the probability boundary
    int samples_per_plane = 20;

    void validate() const; // throws InvalidSpec

    /// The cavity actually used: the configured ellipsoids, or the default
    /// centered one when none are given.
    std::vector<Ellipsoid> effective_cavity() const;
};

struct SyntheticCase {
    std::string case_id;
    BinaryMask ground_truth;
    McSampleSet samples;
    PhantomSpec spec;
};

/// Deterministic phantom: ground truth from the ellipsoid union, per-sample
/// foreground probability = logistic(signed boundary distance / scale +
/// correlated noise), corruption applied as specified. Identical specs give
/// bitwise identical cases.
SyntheticCase generate_phantom(const PhantomSpec& spec);

/// Per-case specs of a verification batch: n_good clean cases followed by
/// n_bad corrupted ones (corruption presets cycled), each with a seed and
/// cavity jitter derived from `seed`. generate_phantom over these is the
/// whole batch; callers that cannot hold a batch in memory stream it from
/// here.
std::vector<PhantomSpec> batch_specs(const PhantomSpec& base, int n_good, int n_bad,
                                     std::uint64_t seed);

/// Materialized batch (fine for small grids; a 64-cubed 25-case batch is
/// about 1.6 GB, prefer streaming over batch_specs for those).
std::vector<SyntheticCase> generate_batch(const PhantomSpec& base, int n_good, int n_bad,
                                          std::uint64_t seed);

/// case_id used for batch element i ("case_000", ...).
std::string batch_case_id(int index);

} // namespace segqa
