#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "segqa/doubt.hpp"
#include "segqa/edt.hpp"
#include "segqa/entropy.hpp"
#include "segqa/fusion.hpp"
#include "segqa/metrics.hpp"
#include "segqa/morphology.hpp"
#include "segqa/synth.hpp"
#include "segqa/triage.hpp"

namespace py = pybind11;
using namespace segqa;

namespace {

// Arrays cross the boundary as (nx, ny, nz) Fortran-ordered buffers, which is
// exactly the library's x-fastest layout.
using DoubleArray = py::array_t<double, py::array::f_style | py::array::forcecast>;
using FloatArray = py::array_t<float, py::array::f_style | py::array::forcecast>;
using MaskArray = py::array_t<std::uint8_t, py::array::f_style | py::array::forcecast>;
using Spacing = std::array<double, 3>;

GridShape grid_of(const py::array& a, const Spacing& s) {
    if (a.ndim() != 3) throw ShapeMismatch("expected a 3-D array");
    return GridShape(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)),
                     static_cast<int>(a.shape(2)), s[0], s[1], s[2]);
}

ScalarVolume volume_of(const DoubleArray& a, const Spacing& s = {1, 1, 1}) {
    const GridShape g = grid_of(a, s);
    std::vector<double> data(a.data(), a.data() + g.voxel_count());
    return ScalarVolume(g, std::move(data));
}

BinaryMask mask_of(const MaskArray& a, const Spacing& s = {1, 1, 1}) {
    const GridShape g = grid_of(a, s);
    std::vector<std::uint8_t> data(a.data(), a.data() + g.voxel_count());
    return BinaryMask(g, std::move(data));
}

template <typename T, typename Vec>
py::array_t<T> to_numpy(const GridShape& g, const Vec& data) {
    py::array_t<T, py::array::f_style> out({g.nx, g.ny, g.nz});
    std::memcpy(out.mutable_data(), data.data(), data.size() * sizeof(T));
    return out;
}

py::array_t<double> to_numpy(const ScalarVolume& v) { return to_numpy<double>(v.shape(), v.data()); }
py::array_t<std::uint8_t> to_numpy(const BinaryMask& m) {
    return to_numpy<std::uint8_t>(m.shape(), m.data());
}

Connectivity conn_of(const std::string& s) {
    if (s == "faces6") return Connectivity::Faces6;
    if (s == "edges18") return Connectivity::Edges18;
    if (s == "full26") return Connectivity::Full26;
    throw InvalidSpec("unknown connectivity '" + s + "'");
}

LogBase log_base_of(const std::string& s) {
    if (s == "natural") return LogBase::Natural;
    if (s == "base2") return LogBase::Base2;
    throw InvalidSpec("unknown log base '" + s + "'");
}

DoubtConfig doubt_config_of(double entropy_threshold, int dilation_iterations,
                            const std::string& connectivity, const std::string& empty_policy) {
    DoubtConfig cfg;
    cfg.entropy_threshold = entropy_threshold;
    cfg.dilation_iterations = dilation_iterations;
    cfg.connectivity = conn_of(connectivity);
    cfg.empty_segmentation_policy =
        empty_policy == "error" ? EmptySegPolicy::Error : EmptySegPolicy::SentinelMax;
    return cfg;
}

std::vector<SampleVolume> samples_of(const std::vector<FloatArray>& arrays) {
    std::vector<SampleVolume> samples;
    samples.reserve(arrays.size());
    for (const auto& a : arrays) {
        const GridShape g = grid_of(a, {1, 1, 1});
        std::vector<float> data(a.data(), a.data() + g.voxel_count());
        samples.emplace_back(g, std::move(data));
    }
    return samples;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Segmentation QA: MC-sample fusion, predictive entropy, doubt scoring, metrics";

    py::register_exception<Error>(m, "SegqaError");

    // volgrid primitives
    m.def(
        "outline",
        [](const MaskArray& mask, const std::string& connectivity) {
            return to_numpy(outline(mask_of(mask), conn_of(connectivity)));
        },
        py::arg("mask"), py::arg("connectivity") = "faces6",
        "Inner boundary: foreground voxels with a background neighbor.");
    m.def(
        "dilate",
        [](const MaskArray& mask, int iterations, const std::string& connectivity) {
            return to_numpy(dilate(mask_of(mask), conn_of(connectivity), iterations));
        },
        py::arg("mask"), py::arg("iterations") = 1, py::arg("connectivity") = "faces6");
    m.def(
        "invert", [](const MaskArray& mask) { return to_numpy(invert(mask_of(mask))); },
        py::arg("mask"));
    m.def(
        "threshold",
        [](const DoubleArray& vol, double tau) { return to_numpy(threshold(volume_of(vol), tau)); },
        py::arg("volume"), py::arg("tau"), "1 where value > tau (strict).");
    m.def(
        "edt",
        [](const MaskArray& target, const Spacing& spacing) {
            return to_numpy(edt(mask_of(target, spacing)));
        },
        py::arg("target"), py::arg("spacing") = Spacing{1, 1, 1},
        "Exact Euclidean distance (mm) to the nearest target voxel.");

    // fusion
    m.def(
        "zscore_normalize",
        [](const DoubleArray& vol) { return to_numpy(zscore_normalize(volume_of(vol))); },
        py::arg("volume"));
    m.def(
        "mc_mean",
        [](const std::vector<FloatArray>& samples) {
            return to_numpy(mc_mean(samples_of(samples)));
        },
        py::arg("samples"), "Voxelwise mean of T probability samples (float32 inputs).");
    m.def(
        "plane_average",
        [](const DoubleArray& a, const DoubleArray& c, const DoubleArray& s) {
            return to_numpy(plane_average(volume_of(a), volume_of(c), volume_of(s)));
        },
        py::arg("axial"), py::arg("coronal"), py::arg("sagittal"));
    m.def(
        "classify", [](const DoubleArray& prob) { return to_numpy(classify(volume_of(prob))); },
        py::arg("probability"), "Foreground where p >= 0.5.");

    // uncertainty
    m.def(
        "predictive_entropy",
        [](const DoubleArray& prob, const std::string& log_base) {
            return to_numpy(predictive_entropy(volume_of(prob), {log_base_of(log_base)}));
        },
        py::arg("probability"), py::arg("log_base") = "natural");
    py::enum_<LogBase>(m, "LogBase")
        .value("natural", LogBase::Natural)
        .value("base2", LogBase::Base2);
    m.def(
        "binary_entropy",
        [](double p, const std::string& log_base) { return binary_entropy(p, log_base_of(log_base)); },
        py::arg("p"), py::arg("log_base") = "natural");

    // doubt
    py::class_<DoubtBreakdown>(m, "DoubtBreakdown")
        .def_readonly("dbt", &DoubtBreakdown::dbt)
        .def_readonly("masked_voxel_count", &DoubtBreakdown::masked_voxel_count)
        .def_readonly("max_weighted_term", &DoubtBreakdown::max_weighted_term)
        .def_readonly("outline_voxel_count", &DoubtBreakdown::outline_voxel_count)
        .def("is_sentinel", &DoubtBreakdown::is_sentinel)
        .def("__repr__", [](const DoubtBreakdown& b) {
            return "DoubtBreakdown(dbt=" + std::to_string(b.dbt) + ", masked=" +
                   std::to_string(b.masked_voxel_count) + ")";
        });
    m.def(
        "exclusion_mask",
        [](const MaskArray& seg, const DoubleArray& entropy, double entropy_threshold,
           int dilation_iterations, const std::string& connectivity) {
            const DoubtConfig cfg =
                doubt_config_of(entropy_threshold, dilation_iterations, connectivity, "sentinel_max");
            return to_numpy(exclusion_mask(mask_of(seg), volume_of(entropy), cfg));
        },
        py::arg("segmentation"), py::arg("entropy"), py::arg("entropy_threshold") = 0.5,
        py::arg("dilation_iterations") = 2, py::arg("connectivity") = "faces6");
    m.def(
        "distance_weight",
        [](const MaskArray& seg, const Spacing& spacing, const std::string& connectivity) {
            return to_numpy(distance_weight(mask_of(seg, spacing), conn_of(connectivity)));
        },
        py::arg("segmentation"), py::arg("spacing") = Spacing{1, 1, 1},
        py::arg("connectivity") = "faces6");
    m.def(
        "doubt_score",
        [](const DoubleArray& entropy, const MaskArray& seg, const Spacing& spacing,
           double entropy_threshold, int dilation_iterations, const std::string& connectivity,
           const std::string& empty_segmentation_policy) {
            const DoubtConfig cfg = doubt_config_of(entropy_threshold, dilation_iterations,
                                                    connectivity, empty_segmentation_policy);
            return doubt_score(volume_of(entropy, spacing), mask_of(seg, spacing), cfg);
        },
        py::arg("entropy"), py::arg("segmentation"), py::arg("spacing") = Spacing{1, 1, 1},
        py::arg("entropy_threshold") = 0.5, py::arg("dilation_iterations") = 2,
        py::arg("connectivity") = "faces6", py::arg("empty_segmentation_policy") = "sentinel_max",
        "Review score: sum of distance-weighted entropy over the exclusion mask.");

    // metrics
    m.def(
        "dice", [](const MaskArray& a, const MaskArray& b) { return dice(mask_of(a), mask_of(b)); },
        py::arg("pred"), py::arg("gt"));
    m.def(
        "volume_similarity",
        [](const MaskArray& a, const MaskArray& b) {
            return volume_similarity(mask_of(a), mask_of(b));
        },
        py::arg("pred"), py::arg("gt"));
    m.def(
        "hd95",
        [](const MaskArray& a, const MaskArray& b, const Spacing& spacing) {
            return hd95(mask_of(a, spacing), mask_of(b, spacing));
        },
        py::arg("pred"), py::arg("gt"), py::arg("spacing") = Spacing{1, 1, 1},
        "95th-percentile symmetric surface distance (mm).");

    // triage
    m.def(
        "flag",
        [](double doubt, double doubt_threshold) {
            return flag(doubt, TriageConfig{doubt_threshold, 0.75});
        },
        py::arg("doubt"), py::arg("doubt_threshold"));
    m.def(
        "quadrant",
        [](double doubt, double dice_value, double doubt_threshold, double dice_threshold) {
            return std::string(
                to_string(quadrant_of(doubt, dice_value, TriageConfig{doubt_threshold, dice_threshold})));
        },
        py::arg("doubt"), py::arg("dice"), py::arg("doubt_threshold"),
        py::arg("dice_threshold") = 0.75);

    // synthetic phantoms
    m.def(
        "generate_phantom",
        [](std::uint64_t seed, int grid, double spacing, int samples_per_plane,
           const std::string& corruption, double noise_sigma, double correlation_mm) {
            PhantomSpec spec;
            spec.seed = seed;
            spec.grid = GridShape::cube(grid, spacing);
            spec.samples_per_plane = samples_per_plane;
            spec.noise.logit_sigma = noise_sigma;
            spec.noise.correlation_mm = correlation_mm;
            if (corruption == "far_blob")
                spec.corruption.kind = CorruptionKind::FarBlob;
            else if (corruption == "boundary_fuzz")
                spec.corruption.kind = CorruptionKind::BoundaryFuzz;
            else if (corruption == "undersegmentation")
                spec.corruption.kind = CorruptionKind::Undersegmentation;
            else if (corruption == "registration_shift")
                spec.corruption.kind = CorruptionKind::RegistrationShift;
            else if (corruption != "none")
                throw InvalidSpec("unknown corruption '" + corruption + "'");

            const SyntheticCase c = generate_phantom(spec);
            py::dict out;
            out["ground_truth"] = to_numpy(c.ground_truth);
            const char* names[3] = {"axial", "coronal", "sagittal"};
            for (int p = 0; p < 3; ++p) {
                py::list arrays;
                for (const auto& s : c.samples.planes[p])
                    arrays.append(to_numpy<float>(s.shape, s.data));
                out[names[p]] = std::move(arrays);
            }
            return out;
        },
        py::arg("seed") = 0, py::arg("grid") = 64, py::arg("spacing") = 1.0,
        py::arg("samples_per_plane") = 20, py::arg("corruption") = "none",
        py::arg("noise_sigma") = 0.5, py::arg("correlation_mm") = 3.0,
        "Deterministic synthetic case: ground truth plus per-plane MC samples.");

    m.attr("__version__") = "0.1.0";
}
