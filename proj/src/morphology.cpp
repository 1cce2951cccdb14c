#include "segqa/morphology.hpp"

namespace segqa {

namespace {

constexpr std::array<std::array<int, 3>, 6> kFaces6{{
    {{-1, 0, 0}}, {{1, 0, 0}}, {{0, -1, 0}}, {{0, 1, 0}}, {{0, 0, -1}}, {{0, 0, 1}},
}};

constexpr std::array<std::array<int, 3>, 18> kEdges18{{
    {{-1, 0, 0}}, {{1, 0, 0}}, {{0, -1, 0}}, {{0, 1, 0}}, {{0, 0, -1}}, {{0, 0, 1}},
    {{-1, -1, 0}}, {{-1, 1, 0}}, {{1, -1, 0}}, {{1, 1, 0}},
    {{-1, 0, -1}}, {{-1, 0, 1}}, {{1, 0, -1}}, {{1, 0, 1}},
    {{0, -1, -1}}, {{0, -1, 1}}, {{0, 1, -1}}, {{0, 1, 1}},
}};

constexpr std::array<std::array<int, 3>, 26> kFull26{{
    {{-1, 0, 0}}, {{1, 0, 0}}, {{0, -1, 0}}, {{0, 1, 0}}, {{0, 0, -1}}, {{0, 0, 1}},
    {{-1, -1, 0}}, {{-1, 1, 0}}, {{1, -1, 0}}, {{1, 1, 0}},
    {{-1, 0, -1}}, {{-1, 0, 1}}, {{1, 0, -1}}, {{1, 0, 1}},
    {{0, -1, -1}}, {{0, -1, 1}}, {{0, 1, -1}}, {{0, 1, 1}},
    {{-1, -1, -1}}, {{-1, -1, 1}}, {{-1, 1, -1}}, {{-1, 1, 1}},
    {{1, -1, -1}}, {{1, -1, 1}}, {{1, 1, -1}}, {{1, 1, 1}},
}};

BinaryMask dilate_once(const BinaryMask& mask, std::span<const std::array<int, 3>> offsets) {
    const GridShape& g = mask.shape();
    BinaryMask out = mask;
    for (int z = 0; z < g.nz; ++z) {
        for (int y = 0; y < g.ny; ++y) {
            for (int x = 0; x < g.nx; ++x) {
                if (mask.at(x, y, z)) continue;
                for (const auto& d : offsets) {
                    const int px = x + d[0], py = y + d[1], pz = z + d[2];
                    if (g.in_bounds(px, py, pz) && mask.at(px, py, pz)) {
                        out.at(x, y, z) = 1;
                        break;
                    }
                }
            }
        }
    }
    return out;
}

} // namespace

std::span<const std::array<int, 3>> neighbor_offsets(Connectivity conn) {
    switch (conn) {
        case Connectivity::Faces6: return kFaces6;
        case Connectivity::Edges18: return kEdges18;
        default: return kFull26;
    }
}

BinaryMask outline(const BinaryMask& mask, Connectivity conn) {
    const GridShape& g = mask.shape();
    const auto offsets = neighbor_offsets(conn);
    BinaryMask out(g);
    for (int z = 0; z < g.nz; ++z) {
        for (int y = 0; y < g.ny; ++y) {
            for (int x = 0; x < g.nx; ++x) {
                if (!mask.at(x, y, z)) continue;
                for (const auto& d : offsets) {
                    const int px = x + d[0], py = y + d[1], pz = z + d[2];
                    // out-of-grid neighbors are absent, not background
                    if (g.in_bounds(px, py, pz) && !mask.at(px, py, pz)) {
                        out.at(x, y, z) = 1;
                        break;
                    }
                }
            }
        }
    }
    return out;
}

BinaryMask dilate(const BinaryMask& mask, Connectivity conn, int iterations) {
    if (iterations < 1) throw InvalidSpec("dilate: iterations must be >= 1");
    const auto offsets = neighbor_offsets(conn);
    BinaryMask out = mask;
    for (int it = 0; it < iterations; ++it) out = dilate_once(out, offsets);
    return out;
}

BinaryMask invert(const BinaryMask& mask) {
    BinaryMask out = mask;
    for (auto& v : out.data()) v = static_cast<std::uint8_t>(1 - v);
    return out;
}

BinaryMask threshold(const ScalarVolume& vol, double tau) {
    BinaryMask out(vol.shape());
    const auto& src = vol.data();
    auto& dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] > tau ? 1 : 0;
    return out;
}

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b) {
    detail::require_same_shape(a.shape(), b.shape(), "mask_and");
    BinaryMask out = a;
    const auto& bd = b.data();
    auto& od = out.data();
    for (std::size_t i = 0; i < od.size(); ++i) od[i] &= bd[i];
    return out;
}

} // namespace segqa
