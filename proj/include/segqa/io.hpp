#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "segqa/fusion.hpp"
#include "segqa/grid.hpp"
#include "segqa/report.hpp"

namespace segqa {

enum class Dtype { F32le, U8 };
enum class Semantic { Intensity, Probability, Entropy, Distance, Label };

const char* to_string(Dtype d);
const char* to_string(Semantic s);

/// Sidecar metadata for one volume file. The payload at `path` is raw
/// little-endian values, x fastest; the sidecar lives at `path + ".json"`
/// with exactly the keys {dims, spacing, dtype, semantic}.
struct VolumeHeader {
    GridShape shape;
    Dtype dtype = Dtype::F32le;
    Semantic semantic = Semantic::Probability;

    static VolumeHeader scalar(const GridShape& shape, Semantic semantic) {
        return {shape, Dtype::F32le, semantic};
    }
    static VolumeHeader label(const GridShape& shape) { return {shape, Dtype::U8, Semantic::Label}; }
};

struct LoadedVolume {
    VolumeHeader header;
    std::variant<ScalarVolume, BinaryMask> data;
};

/// Read sidecar + payload; values are validated per the semantic tag
/// (probability in [0,1], label in {0,1}, everything finite).
/// Throws MissingFile, MalformedHeader, PayloadSizeMismatch, ValueOutOfRange.
LoadedVolume read_volume(const std::filesystem::path& path);

/// Typed conveniences over read_volume.
ScalarVolume read_scalar(const std::filesystem::path& path);
BinaryMask read_label(const std::filesystem::path& path);
/// Reads an f32 payload without widening, for MC sample sets.
SampleVolume read_sample(const std::filesystem::path& path);

/// Write sidecar + payload. Deterministic bytes for identical inputs.
/// f32le payloads round values to the nearest float.
void write_volume(const VolumeHeader& header, const ScalarVolume& vol,
                  const std::filesystem::path& path);
void write_volume(const VolumeHeader& header, const BinaryMask& mask,
                  const std::filesystem::path& path);
void write_volume(const VolumeHeader& header, const SampleVolume& vol,
                  const std::filesystem::path& path);

/// One case in a manifest: per-plane sample files plus optional ground truth
/// and intensity channels. Paths are resolved against the manifest location.
struct CaseManifest {
    std::string case_id;
    std::array<std::vector<std::filesystem::path>, 3> plane_samples; // axial, coronal, sagittal
    std::optional<std::filesystem::path> ground_truth;
    std::map<std::string, std::filesystem::path> intensity; // e.g. T1, T1c, T2, FLAIR
};

/// Manifest file: {"cases": [ ... ]}. Throws MalformedHeader on schema
/// violations, MissingFile if absent.
std::vector<CaseManifest> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::vector<CaseManifest>& cases, const std::filesystem::path& path);

struct LoadedCase {
    std::string case_id;
    McSampleSet samples;
    std::optional<BinaryMask> ground_truth;
    std::map<std::string, ScalarVolume> intensity;
};

/// Load and cross-validate every volume of a case: equal shapes everywhere
/// (ShapeMismatch), equal sample counts per plane (InconsistentT), T >= 1.
LoadedCase load_case(const CaseManifest& manifest);

enum class ReportFormat { Json, Csv };

/// Serialize reports with a stable field order; reals carry 6 significant
/// digits; the sentinel doubt score is written as "inf".
void write_report(const std::vector<CaseReport>& reports, const std::filesystem::path& path,
                  ReportFormat format);

/// Read back a JSON report written by write_report.
std::vector<CaseReport> read_report(const std::filesystem::path& path);

/// Round to 6 significant digits (the report serialization precision).
double report_round(double v);

} // namespace segqa
