#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "segqa/edt.hpp"

using namespace segqa;

TEST_CASE("edt: zero exactly on target voxels") {
    const BinaryMask m = oracle::random_proper_mask(GridShape::cube(10), 11, 0.2);
    const ScalarVolume d = edt(m);
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i])
            CHECK(d[i] == 0.0);
        else
            CHECK(d[i] > 0.0);
    }
}

TEST_CASE("edt: single target at origin, 3-4-5 triangle") {
    BinaryMask m(GridShape::cube(8));
    m.at(0, 0, 0) = 1;
    const ScalarVolume d = edt(m);
    CHECK(d.at(0, 0, 0) == 0.0);
    CHECK(d.at(3, 4, 0) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(d.at(1, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("edt matches the brute-force oracle on random masks") {
    for (std::uint64_t k = 0; k < 12; ++k) {
        const GridShape g(4 + int(k % 13), 5 + int((k * 7) % 12), 4 + int((k * 3) % 11),
                          0.5 + 0.25 * double(k % 5), 1.0, 2.0 - 0.2 * double(k % 4));
        const BinaryMask m = oracle::random_proper_mask(g, 400 + k, k % 3 == 0 ? 0.02 : 0.3);
        const ScalarVolume got = edt(m);
        const ScalarVolume want = oracle::edt(m);
        double max_err = 0.0;
        for (std::size_t i = 0; i < got.size(); ++i)
            max_err = std::max(max_err, std::abs(got[i] - want[i]));
        CHECK(max_err <= 1e-9);
    }
}

TEST_CASE("edt honors anisotropic spacing") {
    BinaryMask m(GridShape(8, 8, 8, 2.0, 3.0, 0.5));
    m.at(0, 0, 0) = 1;
    const ScalarVolume d = edt(m);
    CHECK(d.at(1, 0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(d.at(0, 1, 0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(d.at(0, 0, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d.at(1, 1, 1) == doctest::Approx(std::sqrt(4.0 + 9.0 + 0.25)).epsilon(1e-12));
}

TEST_CASE("edt: empty target is an error") {
    CHECK_THROWS_AS(edt(BinaryMask(GridShape::cube(4))), EmptyTarget);
}

TEST_CASE("edt: line without any in-row target still resolves through other rows") {
    // target only in the (y=0, z=0) row; distances elsewhere must combine axes
    BinaryMask m(GridShape::cube(6));
    m.at(2, 0, 0) = 1;
    const ScalarVolume d = edt(m);
    CHECK(d.at(2, 3, 4) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(d.at(5, 0, 0) == doctest::Approx(3.0).epsilon(1e-12));
}
