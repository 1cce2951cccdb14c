#include "doctest.h"

#include "oracles.hpp"
#include "segqa/morphology.hpp"

using namespace segqa;

namespace {
BinaryMask solid_cube(const GridShape& g, int lo, int hi) {
    BinaryMask m(g);
    for (int z = lo; z <= hi; ++z)
        for (int y = lo; y <= hi; ++y)
            for (int x = lo; x <= hi; ++x) m.at(x, y, z) = 1;
    return m;
}
} // namespace

TEST_CASE("outline: all-zero mask stays all-zero") {
    CHECK(outline(BinaryMask(GridShape::cube(6)), Connectivity::Faces6).empty_foreground());
}

TEST_CASE("outline: isolated voxel is its own outline") {
    BinaryMask m(GridShape::cube(7));
    m.at(3, 3, 3) = 1;
    const BinaryMask o = outline(m, Connectivity::Faces6);
    CHECK(o.foreground_count() == 1);
    CHECK(o.at(3, 3, 3) == 1);
}

TEST_CASE("outline: solid 3x3x3 cube has 26 outline voxels") {
    const BinaryMask m = solid_cube(GridShape::cube(8), 2, 4);
    const BinaryMask o = outline(m, Connectivity::Faces6);
    CHECK(o.foreground_count() == 26);
    CHECK(o.at(3, 3, 3) == 0); // the center is interior
    CHECK(o == oracle::outline(m, Connectivity::Faces6));
}

TEST_CASE("outline: all-foreground grid has no outline (border voxels are not boundary)") {
    BinaryMask m(GridShape::cube(5), 1);
    CHECK(outline(m, Connectivity::Faces6).empty_foreground());
    CHECK(outline(m, Connectivity::Full26).empty_foreground());
}

TEST_CASE("outline is a subset of the foreground on random masks") {
    for (std::uint64_t k = 0; k < 10; ++k) {
        const BinaryMask m = oracle::random_mask(GridShape::cube(9), 100 + k, 0.4);
        for (auto conn : {Connectivity::Faces6, Connectivity::Edges18, Connectivity::Full26}) {
            const BinaryMask o = outline(m, conn);
            CHECK(mask_and(o, m) == o);
            CHECK(o == oracle::outline(m, conn));
        }
    }
}

TEST_CASE("dilate: all-zero mask never grows") {
    CHECK(dilate(BinaryMask(GridShape::cube(6)), Connectivity::Faces6, 3).empty_foreground());
}

TEST_CASE("dilate: single voxel, Faces6, one iteration = 7 voxels") {
    BinaryMask m(GridShape::cube(9));
    m.at(4, 4, 4) = 1;
    CHECK(dilate(m, Connectivity::Faces6, 1).foreground_count() == 7);
}

TEST_CASE("dilate: single voxel, Faces6, two iterations = 25 voxels (L1 ball)") {
    BinaryMask m(GridShape::cube(9));
    m.at(4, 4, 4) = 1;
    const BinaryMask d = dilate(m, Connectivity::Faces6, 2);
    CHECK(d.foreground_count() == 25);
    CHECK(d == oracle::dilate(m, Connectivity::Faces6, 2));
}

TEST_CASE("dilate clips at grid bounds and is monotone") {
    BinaryMask m(GridShape::cube(4));
    m.at(0, 0, 0) = 1;
    const BinaryMask d1 = dilate(m, Connectivity::Full26, 1);
    CHECK(d1.foreground_count() == 8); // corner 2x2x2 only
    for (std::uint64_t k = 0; k < 8; ++k) {
        const BinaryMask r = oracle::random_mask(GridShape::cube(8), 200 + k, 0.15);
        const BinaryMask a = dilate(r, Connectivity::Faces6, 1);
        const BinaryMask b = dilate(r, Connectivity::Faces6, 2);
        CHECK(mask_and(r, a) == r);  // r subset of dilate(r)
        CHECK(mask_and(a, b) == a);  // dilations nest
        CHECK(b == dilate(a, Connectivity::Faces6, 1)); // composition
    }
}

TEST_CASE("dilate on all-ones mask is idempotent") {
    BinaryMask m(GridShape::cube(4), 1);
    CHECK(dilate(m, Connectivity::Faces6, 2) == m);
}

TEST_CASE("invert flips and is an involution") {
    CHECK(invert(BinaryMask(GridShape::cube(3))).foreground_count() == 27);
    for (std::uint64_t k = 0; k < 6; ++k) {
        const BinaryMask m = oracle::random_mask(GridShape::cube(7), 300 + k, 0.5);
        const BinaryMask inv = invert(m);
        for (std::size_t i = 0; i < m.size(); ++i) CHECK(inv[i] == 1 - m[i]);
        CHECK(invert(inv) == m);
    }
}

TEST_CASE("threshold is strict") {
    ScalarVolume v(GridShape::cube(3), 0.5);
    CHECK(threshold(v, 0.5).empty_foreground());
    ScalarVolume w(GridShape::cube(3), 0.6);
    CHECK(threshold(w, 0.5).foreground_count() == 27);

    const ScalarVolume r = oracle::random_volume(GridShape::cube(6), 42, -1.0, 2.0);
    const BinaryMask t = threshold(r, 0.35);
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(t[i] == (r[i] > 0.35 ? 1 : 0));
}

TEST_CASE("strict threshold differs from >= exactly at equality points") {
    ScalarVolume v = oracle::random_volume(GridShape::cube(6), 43, 0.0, 1.0);
    v[3] = 0.35;
    v[77] = 0.35;
    const BinaryMask strict = threshold(v, 0.35);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const bool ge = v[i] >= 0.35;
        if (v[i] == 0.35)
            CHECK((strict[i] == 0 && ge));
        else
            CHECK(strict[i] == (ge ? 1 : 0));
    }
}
