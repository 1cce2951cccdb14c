#include "segqa/edt.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace segqa {

namespace {

// Finite stand-in for "no target in this line yet". Keeping it finite (and
// identical everywhere) makes the envelope intersection arithmetic NaN-free:
// differences of two ABSENT values are exactly zero.
constexpr double kAbsent = 1e30;

// Squared-distance lower envelope along one line (Felzenszwalb-Huttenlocher).
// f holds squared distances sampled at integer positions with physical step
// `step` mm; overwritten with min_j (f[j] + (step*(i-j))^2).
void parabolic_pass(double* f, int n, std::size_t stride, double step, int* vertex,
                    double* boundary, double* row) {
    if (n == 1) return;
    const double w2 = step * step;

    for (int i = 0; i < n; ++i) row[i] = f[static_cast<std::size_t>(i) * stride];

    int k = 0;
    vertex[0] = 0;
    boundary[0] = -std::numeric_limits<double>::infinity();
    boundary[1] = std::numeric_limits<double>::infinity();

    for (int q = 1; q < n; ++q) {
        // intersection of parabola q with the rightmost envelope parabola
        double s;
        for (;;) {
            const int p = vertex[k];
            const double factor = (q - p) * w2;
            s = (row[q] - row[p] + factor * (q + p)) / (2.0 * factor);
            if (k == 0 || s > boundary[k]) break;
            --k;
        }
        ++k;
        vertex[k] = q;
        boundary[k] = s;
        boundary[k + 1] = std::numeric_limits<double>::infinity();
    }

    k = 0;
    for (int i = 0; i < n; ++i) {
        while (boundary[k + 1] < i) ++k;
        const double d = (i - vertex[k]) * step;
        f[static_cast<std::size_t>(i) * stride] = d * d + row[vertex[k]];
    }
}

} // namespace

ScalarVolume edt(const BinaryMask& target) {
    const GridShape& g = target.shape();
    if (target.empty_foreground()) throw EmptyTarget("edt: target mask has no foreground voxel");

    ScalarVolume out(g);
    auto& f = out.data();
    const auto& t = target.data();

    // Pass 1 (x): exact squared distance to the nearest in-row target,
    // tracking indices so each distance is one multiply from an integer.
    const std::size_t row_len = static_cast<std::size_t>(g.nx);
    const std::size_t rows = g.voxel_count() / row_len;
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t base = r * row_len;
        int nearest = -1;
        for (int x = 0; x < g.nx; ++x) {
            if (t[base + x]) nearest = x;
            if (nearest < 0) {
                f[base + x] = kAbsent;
            } else {
                const double d = (x - nearest) * g.sx;
                f[base + x] = d * d;
            }
        }
        nearest = -1;
        for (int x = g.nx - 1; x >= 0; --x) {
            if (t[base + x]) nearest = x;
            if (nearest >= 0) {
                const double d = (nearest - x) * g.sx;
                const double sq = d * d;
                if (sq < f[base + x]) f[base + x] = sq;
            }
        }
    }

    const int max_n = std::max(g.ny, g.nz);
    std::vector<int> vertex(max_n);
    std::vector<double> boundary(max_n + 1);
    std::vector<double> row(max_n);

    // Pass 2 (y)
    for (int z = 0; z < g.nz; ++z) {
        for (int x = 0; x < g.nx; ++x) {
            double* line = f.data() + g.index(x, 0, z);
            parabolic_pass(line, g.ny, static_cast<std::size_t>(g.nx), g.sy, vertex.data(),
                           boundary.data(), row.data());
        }
    }

    // Pass 3 (z)
    const std::size_t plane = static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny);
    for (int y = 0; y < g.ny; ++y) {
        for (int x = 0; x < g.nx; ++x) {
            double* line = f.data() + g.index(x, y, 0);
            parabolic_pass(line, g.nz, plane, g.sz, vertex.data(), boundary.data(), row.data());
        }
    }

    for (auto& v : f) v = std::sqrt(v);
    return out;
}

} // namespace segqa
