#include "segqa/fusion.hpp"

#include <algorithm>
#include <cmath>

namespace segqa {

const GridShape& McSampleSet::shape() const {
    for (const auto& plane : planes)
        if (!plane.empty()) return plane.front().shape;
    throw EmptySampleList("McSampleSet: no samples");
}

int McSampleSet::sample_count() const {
    return static_cast<int>(planes[0].size());
}

void McSampleSet::validate() const {
    const GridShape& ref = shape();
    const std::size_t t = planes[0].size();
    if (t == 0) throw EmptySampleList("McSampleSet: empty axial sample list");
    for (int p = 0; p < 3; ++p) {
        if (planes[p].size() != t)
            throw InconsistentT("McSampleSet: plane " + std::string(to_string(static_cast<Plane>(p))) +
                                " has T=" + std::to_string(planes[p].size()) + ", expected " +
                                std::to_string(t));
        for (const auto& s : planes[p]) {
            if (!(s.shape == ref)) throw ShapeMismatch("McSampleSet: sample shape differs");
            for (std::size_t i = 0; i < s.data.size(); ++i) {
                const float v = s.data[i];
                if (!(v >= 0.0f && v <= 1.0f))
                    throw ValueOutOfRange("McSampleSet: probability outside [0,1] at voxel " +
                                          std::to_string(i));
            }
        }
    }
}

ScalarVolume zscore_normalize(const ScalarVolume& vol) {
    const auto& v = vol.data();
    const double n = static_cast<double>(v.size());
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / n;
    double ss = 0.0;
    for (double x : v) {
        const double d = x - mean;
        ss += d * d;
    }
    const double stddev = std::sqrt(ss / n); // population std
    if (stddev == 0.0) throw ConstantVolume("zscore_normalize: volume has zero spread");

    ScalarVolume out(vol.shape());
    auto& o = out.data();
    for (std::size_t i = 0; i < v.size(); ++i) o[i] = (v[i] - mean) / stddev;
    return out;
}

ScalarVolume mc_mean(std::span<const SampleVolume> samples) {
    if (samples.empty()) throw EmptySampleList("mc_mean: no samples");
    const GridShape& g = samples.front().shape;
    for (const auto& s : samples)
        detail::require_same_shape(g, s.shape, "mc_mean");

    ScalarVolume out(g);
    auto& acc = out.data();
    for (const auto& s : samples) {
        const float* src = s.data.data();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += static_cast<double>(src[i]);
    }
    const double inv_t = 1.0 / static_cast<double>(samples.size());
    for (auto& v : acc) v *= inv_t;
    return out;
}

ScalarVolume plane_average(const ScalarVolume& axial, const ScalarVolume& coronal,
                           const ScalarVolume& sagittal) {
    detail::require_same_shape(axial.shape(), coronal.shape(), "plane_average");
    detail::require_same_shape(axial.shape(), sagittal.shape(), "plane_average");

    ScalarVolume out(axial.shape());
    const auto& a = axial.data();
    const auto& c = coronal.data();
    const auto& s = sagittal.data();
    auto& o = out.data();
    for (std::size_t i = 0; i < o.size(); ++i) {
        // deviation form: exact fixed point when all three inputs agree
        const double m = a[i] + ((c[i] - a[i]) + (s[i] - a[i])) / 3.0;
        o[i] = std::clamp(m, 0.0, 1.0);
    }
    return out;
}

BinaryMask classify(const ScalarVolume& prob) {
    BinaryMask out(prob.shape());
    const auto& p = prob.data();
    auto& o = out.data();
    for (std::size_t i = 0; i < p.size(); ++i) o[i] = p[i] >= 0.5 ? 1 : 0;
    return out;
}

ScalarVolume fuse_probability(const McSampleSet& set) {
    return plane_average(mc_mean(set.samples(Plane::Axial)), mc_mean(set.samples(Plane::Coronal)),
                         mc_mean(set.samples(Plane::Sagittal)));
}

} // namespace segqa
