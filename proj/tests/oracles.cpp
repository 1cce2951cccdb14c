#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "segqa/morphology.hpp"

namespace oracle {

BinaryMask outline(const BinaryMask& mask, Connectivity conn) {
    const GridShape& g = mask.shape();
    const auto offsets = segqa::neighbor_offsets(conn);
    BinaryMask out(g);
    for (int z = 0; z < g.nz; ++z)
        for (int y = 0; y < g.ny; ++y)
            for (int x = 0; x < g.nx; ++x) {
                if (!mask.at(x, y, z)) continue;
                bool boundary = false;
                for (const auto& d : offsets) {
                    const int px = x + d[0], py = y + d[1], pz = z + d[2];
                    if (g.in_bounds(px, py, pz) && mask.at(px, py, pz) == 0) boundary = true;
                }
                out.at(x, y, z) = boundary ? 1 : 0;
            }
    return out;
}

BinaryMask dilate(const BinaryMask& mask, Connectivity conn, int iterations) {
    const GridShape& g = mask.shape();
    const auto offsets = segqa::neighbor_offsets(conn);
    BinaryMask cur = mask;
    for (int it = 0; it < iterations; ++it) {
        BinaryMask next = cur;
        for (int z = 0; z < g.nz; ++z)
            for (int y = 0; y < g.ny; ++y)
                for (int x = 0; x < g.nx; ++x) {
                    if (cur.at(x, y, z)) continue;
                    for (const auto& d : offsets) {
                        const int px = x + d[0], py = y + d[1], pz = z + d[2];
                        if (g.in_bounds(px, py, pz) && cur.at(px, py, pz)) {
                            next.at(x, y, z) = 1;
                            break;
                        }
                    }
                }
        cur = next;
    }
    return cur;
}

ScalarVolume edt(const BinaryMask& target) {
    const GridShape& g = target.shape();
    std::vector<std::array<int, 3>> targets;
    for (int z = 0; z < g.nz; ++z)
        for (int y = 0; y < g.ny; ++y)
            for (int x = 0; x < g.nx; ++x)
                if (target.at(x, y, z)) targets.push_back({x, y, z});
    if (targets.empty()) throw segqa::EmptyTarget("oracle edt: empty target");

    ScalarVolume out(g);
    for (int z = 0; z < g.nz; ++z)
        for (int y = 0; y < g.ny; ++y)
            for (int x = 0; x < g.nx; ++x) {
                double best = std::numeric_limits<double>::infinity();
                for (const auto& t : targets) {
                    const double dx = (x - t[0]) * g.sx;
                    const double dy = (y - t[1]) * g.sy;
                    const double dz = (z - t[2]) * g.sz;
                    best = std::min(best, dx * dx + dy * dy + dz * dz);
                }
                out.at(x, y, z) = std::sqrt(best);
            }
    return out;
}

long double dice(const BinaryMask& a, const BinaryMask& b) {
    long long na = 0, nb = 0, nab = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        na += a[i];
        nb += b[i];
        nab += (a[i] && b[i]) ? 1 : 0;
    }
    if (na + nb == 0) return 1.0L;
    return 2.0L * static_cast<long double>(nab) / static_cast<long double>(na + nb);
}

long double volume_similarity(const BinaryMask& a, const BinaryMask& b) {
    long long na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        na += a[i];
        nb += b[i];
    }
    if (na + nb == 0) return 1.0L;
    return 1.0L - static_cast<long double>(std::llabs(na - nb)) / static_cast<long double>(na + nb);
}

namespace {

std::vector<std::array<int, 3>> surface_voxels(const BinaryMask& mask) {
    const BinaryMask surf = oracle::outline(mask, Connectivity::Faces6);
    const GridShape& g = mask.shape();
    std::vector<std::array<int, 3>> voxels;
    for (int z = 0; z < g.nz; ++z)
        for (int y = 0; y < g.ny; ++y)
            for (int x = 0; x < g.nx; ++x)
                if (surf.at(x, y, z)) voxels.push_back({x, y, z});
    return voxels;
}

double nearest_mm(const std::array<int, 3>& v, const std::vector<std::array<int, 3>>& to,
                  const GridShape& g) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : to) {
        const double dx = (v[0] - t[0]) * g.sx;
        const double dy = (v[1] - t[1]) * g.sy;
        const double dz = (v[2] - t[2]) * g.sz;
        best = std::min(best, dx * dx + dy * dy + dz * dz);
    }
    return std::sqrt(best);
}

double interpolated_percentile(std::vector<double> xs, double pct) {
    std::sort(xs.begin(), xs.end());
    const double rank = pct / 100.0 * static_cast<double>(xs.size() - 1);
    const auto lo = static_cast<std::size_t>(rank);
    if (lo + 1 >= xs.size()) return xs.back();
    const double frac = rank - static_cast<double>(lo);
    return xs[lo] * (1.0 - frac) + xs[lo + 1] * frac;
}

} // namespace

double hd95(const BinaryMask& pred, const BinaryMask& gt) {
    const auto sa = surface_voxels(pred);
    const auto sb = surface_voxels(gt);
    if (sa.empty() || sb.empty()) throw segqa::EmptyMask("oracle hd95: empty surface");
    std::vector<double> pooled;
    pooled.reserve(sa.size() + sb.size());
    for (const auto& v : sa) pooled.push_back(nearest_mm(v, sb, pred.shape()));
    for (const auto& v : sb) pooled.push_back(nearest_mm(v, sa, pred.shape()));
    return interpolated_percentile(std::move(pooled), 95.0);
}

double doubt_score(const ScalarVolume& entropy, const BinaryMask& seg,
                   const segqa::DoubtConfig& cfg) {
    // step (a): the outline of the segmentation, dilated
    const BinaryMask seg_outline = oracle::outline(seg, cfg.connectivity);
    BinaryMask band = seg_outline;
    if (cfg.dilation_iterations > 0 && !band.empty_foreground())
        band = oracle::dilate(band, cfg.connectivity, cfg.dilation_iterations);
    // step (b): invert; step (c): keep only voxels above the entropy gate
    const GridShape& g = seg.shape();
    std::vector<std::uint8_t> k(g.voxel_count());
    for (std::size_t i = 0; i < k.size(); ++i)
        k[i] = (band[i] == 0 && entropy[i] > cfg.entropy_threshold) ? 1 : 0;

    // distance weights: Euclidean distance to the outline
    const ScalarVolume w = oracle::edt(seg_outline); // throws EmptyTarget for empty outline
    double sum = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i)
        if (k[i]) sum += w[i] * entropy[i];
    return sum;
}

BinaryMask random_mask(const GridShape& shape, std::uint64_t key, double density) {
    const segqa::rng::KeyedStream stream(key);
    BinaryMask m(shape);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = stream.uniform(i) < density ? 1 : 0;
    return m;
}

BinaryMask random_proper_mask(const GridShape& shape, std::uint64_t key, double density) {
    BinaryMask m = random_mask(shape, key, density);
    m[0] = 0;                // keep at least one background voxel
    if (m.empty_foreground()) m[m.size() / 2] = 1;
    return m;
}

ScalarVolume random_volume(const GridShape& shape, std::uint64_t key, double lo, double hi) {
    const segqa::rng::KeyedStream stream(key);
    ScalarVolume v(shape);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = stream.uniform(i, lo, hi);
    return v;
}

BinaryMask random_blob(const GridShape& shape, std::uint64_t key) {
    const segqa::rng::KeyedStream stream(key);
    // a few random balls on top of sparse noise gives plausible lumpy shapes
    const int n_balls = 1 + static_cast<int>(stream.bits(0) % 3);
    BinaryMask m(shape);
    for (int b = 0; b < n_balls; ++b) {
        const double cx = stream.uniform(10 + 4 * b, 0.0, (shape.nx - 1) * shape.sx);
        const double cy = stream.uniform(11 + 4 * b, 0.0, (shape.ny - 1) * shape.sy);
        const double cz = stream.uniform(12 + 4 * b, 0.0, (shape.nz - 1) * shape.sz);
        const double r = stream.uniform(13 + 4 * b, 1.5, 0.35 * std::min({(shape.nx - 1) * shape.sx,
                                                                          (shape.ny - 1) * shape.sy,
                                                                          (shape.nz - 1) * shape.sz}));
        for (int z = 0; z < shape.nz; ++z)
            for (int y = 0; y < shape.ny; ++y)
                for (int x = 0; x < shape.nx; ++x) {
                    const double dx = x * shape.sx - cx, dy = y * shape.sy - cy,
                                 dz = z * shape.sz - cz;
                    if (dx * dx + dy * dy + dz * dz <= r * r) m.at(x, y, z) = 1;
                }
    }
    m[0] = 0;
    if (m.empty_foreground()) m[m.size() / 2] = 1;
    return m;
}

} // namespace oracle
