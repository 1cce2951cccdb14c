#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "segqa/errors.hpp"

namespace segqa {

/// 3-D voxel grid geometry: dimensions plus physical spacing in mm.
/// All volume types in this library use the same linear layout:
/// index(x,y,z) = x + nx*(y + ny*z), i.e. x varies fastest.
struct GridShape {
    int nx = 0;
    int ny = 0;
    int nz = 0;
    double sx = 1.0;
    double sy = 1.0;
    double sz = 1.0;

    GridShape() = default;
    GridShape(int nx_, int ny_, int nz_, double sx_ = 1.0, double sy_ = 1.0, double sz_ = 1.0)
        : nx(nx_), ny(ny_), nz(nz_), sx(sx_), sy(sy_), sz(sz_) {
        validate();
    }

    /// Cubic grid with isotropic spacing.
    static GridShape cube(int n, double spacing = 1.0) { return {n, n, n, spacing, spacing, spacing}; }

    void validate() const {
        if (nx < 1 || ny < 1 || nz < 1)
            throw InvalidSpec("grid dims must be >= 1, got " + std::to_string(nx) + "x" +
                              std::to_string(ny) + "x" + std::to_string(nz));
        for (double s : {sx, sy, sz})
            if (!(s > 0.0) || !std::isfinite(s))
                throw InvalidSpec("grid spacing must be finite and positive");
        // keep the total addressable (2^40 voxels is far beyond any use here)
        const auto total = static_cast<std::uint64_t>(nx) * static_cast<std::uint64_t>(ny) *
                           static_cast<std::uint64_t>(nz);
        if (total > (std::uint64_t{1} << 40))
            throw InvalidSpec("grid too large: " + std::to_string(total) + " voxels");
    }

    std::size_t voxel_count() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
               static_cast<std::size_t>(nz);
    }

    std::size_t index(int x, int y, int z) const {
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(nx) *
                   (static_cast<std::size_t>(y) + static_cast<std::size_t>(ny) * static_cast<std::size_t>(z));
    }

    bool in_bounds(int x, int y, int z) const {
        return x >= 0 && x < nx && y >= 0 && y < ny && z >= 0 && z < nz;
    }

    std::array<double, 3> spacing() const { return {sx, sy, sz}; }

    bool operator==(const GridShape&) const = default;

    std::string to_string() const {
        return std::to_string(nx) + "x" + std::to_string(ny) + "x" + std::to_string(nz);
    }
};

namespace detail {

inline void require_same_shape(const GridShape& a, const GridShape& b, const char* what) {
    if (!(a == b))
        throw ShapeMismatch(std::string(what) + ": shapes differ (" + a.to_string() + " vs " +
                            b.to_string() + " or spacing mismatch)");
}

} // namespace detail

/// Dense 3-D field of real values (intensities, probabilities, entropy,
/// distances). Values are doubles; construction from raw data rejects
/// non-finite entries.
class ScalarVolume {
public:
    ScalarVolume() = default;

    explicit ScalarVolume(const GridShape& shape, double fill = 0.0)
        : shape_(shape), data_(shape.voxel_count(), fill) {
        shape_.validate();
    }

    ScalarVolume(const GridShape& shape, std::vector<double> data) : shape_(shape), data_(std::move(data)) {
        shape_.validate();
        if (data_.size() != shape_.voxel_count())
            throw ShapeMismatch("ScalarVolume: payload has " + std::to_string(data_.size()) +
                                " values, shape needs " + std::to_string(shape_.voxel_count()));
        for (std::size_t i = 0; i < data_.size(); ++i)
            if (!std::isfinite(data_[i]))
                throw ValueOutOfRange("ScalarVolume: non-finite value at voxel " + std::to_string(i));
    }

    const GridShape& shape() const { return shape_; }
    std::size_t size() const { return data_.size(); }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    double& at(int x, int y, int z) { return data_[shape_.index(x, y, z)]; }
    double at(int x, int y, int z) const { return data_[shape_.index(x, y, z)]; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool operator==(const ScalarVolume&) const = default;

private:
    GridShape shape_;
    std::vector<double> data_;
};

/// Dense 3-D binary field ({0,1} per voxel): segmentations, outlines,
/// exclusion masks, ground-truth labels.
class BinaryMask {
public:
    BinaryMask() = default;

    explicit BinaryMask(const GridShape& shape, std::uint8_t fill = 0)
        : shape_(shape), data_(shape.voxel_count(), fill) {
        shape_.validate();
        if (fill > 1) throw ValueOutOfRange("BinaryMask: fill value must be 0 or 1");
    }

    BinaryMask(const GridShape& shape, std::vector<std::uint8_t> data)
        : shape_(shape), data_(std::move(data)) {
        shape_.validate();
        if (data_.size() != shape_.voxel_count())
            throw ShapeMismatch("BinaryMask: payload has " + std::to_string(data_.size()) +
                                " values, shape needs " + std::to_string(shape_.voxel_count()));
        for (std::size_t i = 0; i < data_.size(); ++i)
            if (data_[i] > 1)
                throw ValueOutOfRange("BinaryMask: non-binary value " + std::to_string(int(data_[i])) +
                                      " at voxel " + std::to_string(i));
    }

    const GridShape& shape() const { return shape_; }
    std::size_t size() const { return data_.size(); }

    std::uint8_t& operator[](std::size_t i) { return data_[i]; }
    std::uint8_t operator[](std::size_t i) const { return data_[i]; }

    std::uint8_t& at(int x, int y, int z) { return data_[shape_.index(x, y, z)]; }
    std::uint8_t at(int x, int y, int z) const { return data_[shape_.index(x, y, z)]; }

    std::vector<std::uint8_t>& data() { return data_; }
    const std::vector<std::uint8_t>& data() const { return data_; }

    std::size_t foreground_count() const {
        std::size_t n = 0;
        for (auto v : data_) n += v;
        return n;
    }

    bool empty_foreground() const {
        for (auto v : data_)
            if (v) return false;
        return true;
    }

    bool operator==(const BinaryMask&) const = default;

private:
    GridShape shape_;
    std::vector<std::uint8_t> data_;
};

/// One raw stochastic prediction: foreground probabilities kept in f32,
/// matching the on-disk payload. Reductions over samples accumulate in
/// double (see fusion).
struct SampleVolume {
    GridShape shape;
    std::vector<float> data;

    SampleVolume() = default;
    SampleVolume(const GridShape& s, std::vector<float> d) : shape(s), data(std::move(d)) {
        shape.validate();
        if (data.size() != shape.voxel_count())
            throw ShapeMismatch("SampleVolume: payload size mismatch");
    }
    explicit SampleVolume(const GridShape& s) : shape(s), data(s.voxel_count(), 0.0f) {}

    std::size_t size() const { return data.size(); }
    bool operator==(const SampleVolume&) const = default;
};

/// Structuring element for morphology: which voxels count as neighbors.
enum class Connectivity { Faces6, Edges18, Full26 };

/// Anatomical slice orientations used for plane-wise prediction fusion.
enum class Plane { Axial = 0, Coronal = 1, Sagittal = 2 };

inline const char* to_string(Plane p) {
    switch (p) {
        case Plane::Axial: return "axial";
        case Plane::Coronal: return "coronal";
        default: return "sagittal";
    }
}

inline const char* to_string(Connectivity c) {
    switch (c) {
        case Connectivity::Faces6: return "faces6";
        case Connectivity::Edges18: return "edges18";
        default: return "full26";
    }
}

} // namespace segqa
