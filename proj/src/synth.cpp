#include "segqa/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "segqa/rng.hpp"

namespace segqa {

namespace {

// stream tags so the per-purpose noise draws never collide
constexpr std::uint64_t kTagBaseNoise = 0x6e6f6973;
constexpr std::uint64_t kTagFuzzNoise = 0x66757a7a;
constexpr std::uint64_t kTagFuzzBias = 0x62696173;
constexpr std::uint64_t kTagBlobAmp = 0x626c6f62;
constexpr std::uint64_t kTagJitter = 0x6a697474;

// Signed "radial" distance surrogate for an ellipsoid union: positive inside,
// zero on the surface, approximately mm outside. Exact enough for a phantom.
double signed_cavity_mm(const std::vector<Ellipsoid>& cavity, double x, double y, double z) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& e : cavity) {
        const double dx = (x - e.center_mm[0]) / e.semi_axes_mm[0];
        const double dy = (y - e.center_mm[1]) / e.semi_axes_mm[1];
        const double dz = (z - e.center_mm[2]) / e.semi_axes_mm[2];
        const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
        const double scale = *std::min_element(e.semi_axes_mm.begin(), e.semi_axes_mm.end());
        best = std::max(best, (1.0 - r) * scale);
    }
    return best;
}

std::vector<double> signed_field(const GridShape& g, const std::vector<Ellipsoid>& cavity) {
    std::vector<double> s(g.voxel_count());
    std::size_t i = 0;
    for (int z = 0; z < g.nz; ++z)
        for (int y = 0; y < g.ny; ++y)
            for (int x = 0; x < g.nx; ++x, ++i)
                s[i] = signed_cavity_mm(cavity, x * g.sx, y * g.sy, z * g.sz);
    return s;
}

// In-place box blur along one axis with a clamped (shrinking) window.
void box_blur_axis(std::vector<double>& v, const GridShape& g, int axis, int radius,
                   std::vector<double>& scratch) {
    if (radius < 1) return;
    const int n = axis == 0 ? g.nx : axis == 1 ? g.ny : g.nz;
    const std::size_t stride = axis == 0 ? 1
                               : axis == 1 ? static_cast<std::size_t>(g.nx)
                                           : static_cast<std::size_t>(g.nx) * g.ny;
    const std::size_t lines = g.voxel_count() / static_cast<std::size_t>(n);
    scratch.resize(static_cast<std::size_t>(n));

    for (std::size_t line = 0; line < lines; ++line) {
        // enumerate the base offset of this line: split the linear index over
        // the two non-axis dimensions
        std::size_t base;
        if (axis == 0) {
            base = line * static_cast<std::size_t>(g.nx);
        } else if (axis == 1) {
            const std::size_t x = line % g.nx, z = line / g.nx;
            base = x + static_cast<std::size_t>(g.nx) * g.ny * z;
        } else {
            base = line; // x + nx*y
        }
        for (int i = 0; i < n; ++i) scratch[i] = v[base + stride * i];
        double running = 0.0;
        int lo = 0, hi = -1; // inclusive window [lo, hi]
        for (int i = 0; i < n; ++i) {
            const int want_hi = std::min(n - 1, i + radius);
            const int want_lo = std::max(0, i - radius);
            while (hi < want_hi) running += scratch[++hi];
            while (lo < want_lo) running -= scratch[lo++];
            v[base + stride * i] = running / static_cast<double>(hi - lo + 1);
        }
    }
}

int blur_radius(double correlation_mm, double spacing) {
    return std::max(0, static_cast<int>(std::lround(correlation_mm / (2.0 * spacing))));
}

// White unit-variance noise smoothed per axis; rescaled so the interior
// variance is 1 again.
std::vector<double> correlated_noise(const GridShape& g, std::uint64_t key, double correlation_mm,
                                     std::vector<double>& scratch) {
    std::vector<double> noise(g.voxel_count());
    const rng::KeyedStream stream(key);
    for (std::size_t i = 0; i < noise.size(); ++i) noise[i] = stream.unit_variance_uniform(i);

    double variance_factor = 1.0;
    const double spacings[3] = {g.sx, g.sy, g.sz};
    for (int axis = 0; axis < 3; ++axis) {
        const int r = blur_radius(correlation_mm, spacings[axis]);
        if (r >= 1) {
            box_blur_axis(noise, g, axis, r, scratch);
            variance_factor /= static_cast<double>(2 * r + 1);
        }
    }
    const double restore = 1.0 / std::sqrt(variance_factor);
    for (auto& v : noise) v *= restore;
    return noise;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct BlobPlacement {
    std::array<double, 3> center_mm{};
    double radius_mm = 0.0;
    double gain = 1.0;
};

// Place the spurious blob along the grid diagonal, blob_gap_mm beyond the
// cavity surface, and check it fits inside the grid with a one-voxel margin.
BlobPlacement place_blob(const PhantomSpec& spec, const std::vector<Ellipsoid>& cavity) {
    std::array<double, 3> centroid{};
    for (const auto& e : cavity)
        for (int a = 0; a < 3; ++a) centroid[a] += e.center_mm[a] / static_cast<double>(cavity.size());

    const double inv_sqrt3 = 0.5773502691896258;
    const std::array<double, 3> dir{inv_sqrt3, inv_sqrt3, inv_sqrt3};

    double extent = 0.0;
    for (const auto& e : cavity) {
        double along = 0.0, q = 0.0;
        for (int a = 0; a < 3; ++a) {
            along += (e.center_mm[a] - centroid[a]) * dir[a];
            q += (dir[a] / e.semi_axes_mm[a]) * (dir[a] / e.semi_axes_mm[a]);
        }
        extent = std::max(extent, along + 1.0 / std::sqrt(q));
    }

    const Corruption& c = spec.corruption;
    const double t = extent + c.blob_gap_mm + c.blob_radius_mm;
    BlobPlacement blob;
    blob.radius_mm = c.blob_radius_mm;
    const GridShape& g = spec.grid;
    const double extent_mm[3] = {(g.nx - 1) * g.sx, (g.ny - 1) * g.sy, (g.nz - 1) * g.sz};
    const double margin[3] = {g.sx, g.sy, g.sz};
    for (int a = 0; a < 3; ++a) {
        blob.center_mm[a] = centroid[a] + t * dir[a];
        if (blob.center_mm[a] - blob.radius_mm < margin[a] ||
            blob.center_mm[a] + blob.radius_mm > extent_mm[a] - margin[a])
            throw InvalidSpec("far_blob does not fit inside the grid (gap " +
                              std::to_string(c.blob_gap_mm) + " mm, radius " +
                              std::to_string(c.blob_radius_mm) + " mm)");
    }
    return blob;
}

} // namespace

const char* to_string(CorruptionKind k) {
    switch (k) {
        case CorruptionKind::None: return "none";
        case CorruptionKind::FarBlob: return "far_blob";
        case CorruptionKind::BoundaryFuzz: return "boundary_fuzz";
        case CorruptionKind::Undersegmentation: return "undersegmentation";
        default: return "registration_shift";
    }
}

std::vector<Ellipsoid> PhantomSpec::effective_cavity() const {
    if (!cavity.empty()) return cavity;
    const double cx = (grid.nx - 1) * grid.sx / 2.0;
    const double cy = (grid.ny - 1) * grid.sy / 2.0;
    const double cz = (grid.nz - 1) * grid.sz / 2.0;
    // default cavity sized for the default 64-cubed grid, scaled with it
    const double unit = std::min({(grid.nx - 1) * grid.sx, (grid.ny - 1) * grid.sy,
                                  (grid.nz - 1) * grid.sz}) /
                        63.0;
    return {Ellipsoid{{cx, cy, cz}, {10.0 * unit, 12.0 * unit, 9.0 * unit}}};
}

void PhantomSpec::validate() const {
    grid.validate();
    if (samples_per_plane < 1) throw InvalidSpec("samples_per_plane must be >= 1");
    if (!(logistic_scale_mm > 0.0)) throw InvalidSpec("logistic_scale_mm must be > 0");
    if (noise.logit_sigma < 0.0) throw InvalidSpec("noise sigma must be >= 0");
    if (noise.correlation_mm < 0.0) throw InvalidSpec("noise correlation must be >= 0");
    const double extent_mm[3] = {(grid.nx - 1) * grid.sx, (grid.ny - 1) * grid.sy,
                                 (grid.nz - 1) * grid.sz};
    for (const auto& e : effective_cavity()) {
        for (int a = 0; a < 3; ++a) {
            if (!(e.semi_axes_mm[a] > 0.0)) throw InvalidSpec("ellipsoid semi-axes must be > 0");
            if (e.center_mm[a] - e.semi_axes_mm[a] < 0.0 ||
                e.center_mm[a] + e.semi_axes_mm[a] > extent_mm[a])
                throw InvalidSpec("cavity ellipsoid does not fit inside the grid");
        }
    }
    if (corruption.kind == CorruptionKind::FarBlob) {
        if (!(corruption.blob_radius_mm > 0.0) || corruption.blob_gap_mm < 0.0)
            throw InvalidSpec("far_blob needs radius > 0 and gap >= 0");
    }
    if (corruption.kind == CorruptionKind::BoundaryFuzz && !(corruption.fuzz_band_mm > 0.0))
        throw InvalidSpec("boundary_fuzz needs band > 0");
}

SyntheticCase generate_phantom(const PhantomSpec& spec) {
    spec.validate();
    const GridShape& g = spec.grid;
    const std::size_t n = g.voxel_count();
    const std::vector<Ellipsoid> cavity = spec.effective_cavity();
    const Corruption& corr = spec.corruption;

    // ground truth from the uncorrupted cavity
    const std::vector<double> s_true = signed_field(g, cavity);
    BinaryMask truth(g);
    for (std::size_t i = 0; i < n; ++i) truth[i] = s_true[i] >= 0.0 ? 1 : 0;

    // the prediction's view of the cavity
    std::vector<double> base_logit;
    if (corr.kind == CorruptionKind::RegistrationShift) {
        std::vector<Ellipsoid> shifted = cavity;
        for (auto& e : shifted) {
            e.center_mm[0] += corr.shift_voxels[0] * g.sx;
            e.center_mm[1] += corr.shift_voxels[1] * g.sy;
            e.center_mm[2] += corr.shift_voxels[2] * g.sz;
        }
        base_logit = signed_field(g, shifted);
    } else {
        base_logit = s_true;
    }
    if (corr.kind == CorruptionKind::Undersegmentation) {
        const double pull = corr.erosion_iterations * std::min({g.sx, g.sy, g.sz});
        for (auto& v : base_logit) v -= pull;
    }
    for (auto& v : base_logit) v /= spec.logistic_scale_mm;

    // boundary-fuzz envelope and the case-coherent bias field
    std::vector<double> fuzz_envelope, fuzz_bias;
    std::vector<double> scratch;
    if (corr.kind == CorruptionKind::BoundaryFuzz) {
        fuzz_envelope.resize(n);
        const double band = corr.fuzz_band_mm;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = s_true[i] / band;
            fuzz_envelope[i] = std::exp(-r * r);
        }
        fuzz_bias = correlated_noise(g, rng::derive_key({spec.seed, kTagFuzzBias}),
                                     spec.noise.correlation_mm, scratch);
    }

    BlobPlacement blob;
    if (corr.kind == CorruptionKind::FarBlob) blob = place_blob(spec, cavity);

    SyntheticCase out;
    out.ground_truth = std::move(truth);
    out.spec = spec;

    const bool has_noise = spec.noise.logit_sigma > 0.0;
    std::vector<double> noise;
    for (int plane = 0; plane < 3; ++plane) {
        auto& samples = out.samples.planes[plane];
        samples.reserve(spec.samples_per_plane);
        for (int t = 0; t < spec.samples_per_plane; ++t) {
            const std::uint64_t pt = rng::derive_key(
                {spec.seed, static_cast<std::uint64_t>(plane), static_cast<std::uint64_t>(t)});

            SampleVolume sample(g);
            float* p = sample.data.data();

            if (has_noise)
                noise = correlated_noise(g, rng::derive_key({pt, kTagBaseNoise}),
                                         spec.noise.correlation_mm, scratch);

            if (corr.kind == CorruptionKind::BoundaryFuzz) {
                std::vector<double> fuzz = correlated_noise(
                    g, rng::derive_key({pt, kTagFuzzNoise}), spec.noise.correlation_mm, scratch);
                for (std::size_t i = 0; i < n; ++i) {
                    double logit = base_logit[i];
                    if (has_noise) logit += spec.noise.logit_sigma * noise[i];
                    logit += fuzz_envelope[i] *
                             (corr.fuzz_bias * fuzz_bias[i] + corr.fuzz_sigma * fuzz[i]);
                    p[i] = static_cast<float>(logistic(logit));
                }
            } else {
                for (std::size_t i = 0; i < n; ++i) {
                    double logit = base_logit[i];
                    if (has_noise) logit += spec.noise.logit_sigma * noise[i];
                    p[i] = static_cast<float>(logistic(logit));
                }
            }

            if (corr.kind == CorruptionKind::FarBlob) {
                // spurious region with strong per-sample amplitude swings:
                // segmented on average, undecided across samples
                const rng::KeyedStream amp_stream(rng::derive_key({pt, kTagBlobAmp}));
                const double amp =
                    corr.blob_logit_mean + corr.blob_logit_spread * amp_stream.gaussian(0);
                const double support = 1.6 * blob.radius_mm; // logit taper cutoff
                const int x0 = std::max(0, static_cast<int>((blob.center_mm[0] - support) / g.sx));
                const int x1 = std::min(g.nx - 1, static_cast<int>((blob.center_mm[0] + support) / g.sx) + 1);
                const int y0 = std::max(0, static_cast<int>((blob.center_mm[1] - support) / g.sy));
                const int y1 = std::min(g.ny - 1, static_cast<int>((blob.center_mm[1] + support) / g.sy) + 1);
                const int z0 = std::max(0, static_cast<int>((blob.center_mm[2] - support) / g.sz));
                const int z1 = std::min(g.nz - 1, static_cast<int>((blob.center_mm[2] + support) / g.sz) + 1);
                for (int z = z0; z <= z1; ++z) {
                    for (int y = y0; y <= y1; ++y) {
                        for (int x = x0; x <= x1; ++x) {
                            const double dx = x * g.sx - blob.center_mm[0];
                            const double dy = y * g.sy - blob.center_mm[1];
                            const double dz = z * g.sz - blob.center_mm[2];
                            const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
                            if (d > support) continue;
                            const double rho = d / blob.radius_mm;
                            const double blob_p = logistic(blob.gain * (1.0 - rho * rho) + amp);
                            const std::size_t i = g.index(x, y, z);
                            if (blob_p > p[i]) p[i] = static_cast<float>(blob_p);
                        }
                    }
                }
            }

            samples.push_back(std::move(sample));
        }
    }
    return out;
}

std::string batch_case_id(int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "case_%03d", index);
    return buf;
}

std::vector<PhantomSpec> batch_specs(const PhantomSpec& base, int n_good, int n_bad,
                                     std::uint64_t seed) {
    if (n_good < 0 || n_bad < 0) throw InvalidSpec("batch sizes must be >= 0");
    base.validate();

    std::vector<PhantomSpec> specs;
    specs.reserve(static_cast<std::size_t>(n_good + n_bad));
    const std::vector<Ellipsoid> base_cavity = base.effective_cavity();

    for (int i = 0; i < n_good + n_bad; ++i) {
        PhantomSpec spec = base;
        const std::uint64_t case_key = rng::derive_key({seed, static_cast<std::uint64_t>(i)});
        spec.seed = rng::mix64(case_key);

        // mild per-case anatomy variation
        const rng::KeyedStream jitter(rng::derive_key({case_key, kTagJitter}));
        spec.cavity = base_cavity;
        std::uint64_t ctr = 0;
        for (auto& e : spec.cavity) {
            for (int a = 0; a < 3; ++a)
                e.semi_axes_mm[a] *= jitter.uniform(ctr++, 0.95, 1.05);
            for (int a = 0; a < 3; ++a)
                e.center_mm[a] += jitter.uniform(ctr++, -1.0, 1.0);
        }

        if (i >= n_good) {
            // effective cavity radius drives blob sizing so dice targets are
            // stable under the jitter above
            double r_eff = 0.0;
            for (const auto& e : spec.cavity)
                r_eff = std::max(r_eff, std::cbrt(e.semi_axes_mm[0] * e.semi_axes_mm[1] *
                                                  e.semi_axes_mm[2]));
            // blob sizes and gaps scale with the cavity so the presets stay
            // inside the grid and keep their dice targets across grid sizes
            Corruption c;
            switch ((i - n_good) % 5) {
                case 0: // massive spurious region, moderately far
                    c.kind = CorruptionKind::FarBlob;
                    c.blob_gap_mm = 0.75 * r_eff;
                    c.blob_radius_mm = 1.0 * r_eff;
                    break;
                case 1: // medium blob, close past the band
                    c.kind = CorruptionKind::FarBlob;
                    c.blob_gap_mm = 0.6 * r_eff;
                    c.blob_radius_mm = 0.85 * r_eff;
                    break;
                case 2: // incoherent boundary: wide uncertain band + quality drop
                    c.kind = CorruptionKind::BoundaryFuzz;
                    break;
                case 3: // medium blob, farther out
                    c.kind = CorruptionKind::FarBlob;
                    c.blob_gap_mm = 1.2 * r_eff;
                    c.blob_radius_mm = 0.85 * r_eff;
                    break;
                default: // misregistered prediction: wrong but confident
                    c.kind = CorruptionKind::RegistrationShift;
                    c.shift_voxels = {5, 0, 0};
                    break;
            }
            spec.corruption = c;
        }
        specs.push_back(std::move(spec));
    }
    return specs;
}

std::vector<SyntheticCase> generate_batch(const PhantomSpec& base, int n_good, int n_bad,
                                          std::uint64_t seed) {
    const auto specs = batch_specs(base, n_good, n_bad, seed);
    std::vector<SyntheticCase> cases;
    cases.reserve(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        cases.push_back(generate_phantom(specs[i]));
        cases.back().case_id = batch_case_id(static_cast<int>(i));
    }
    return cases;
}

} // namespace segqa
