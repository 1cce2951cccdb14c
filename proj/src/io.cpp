#include "segqa/io.hpp"

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include "json.hpp"

namespace segqa {

namespace {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string format_real(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

template <typename T>
void byteswap_each(std::vector<T>& values) {
    for (auto& v : values) {
        auto bytes = std::bit_cast<std::array<std::uint8_t, sizeof(T)>>(v);
        std::reverse(bytes.begin(), bytes.end());
        v = std::bit_cast<T>(bytes);
    }
}

std::vector<std::uint8_t> read_file_bytes(const fs::path& path, std::size_t expected,
                                          const char* what) {
    if (!fs::exists(path)) throw MissingFile(std::string(what) + " not found: " + path.string());
    const auto actual = static_cast<std::size_t>(fs::file_size(path));
    if (actual != expected)
        throw PayloadSizeMismatch("payload " + path.string() + ": expected " +
                                  std::to_string(expected) + " bytes, found " +
                                  std::to_string(actual));
    std::ifstream in(path, std::ios::binary);
    std::vector<std::uint8_t> bytes(actual);
    if (!in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(actual)))
        throw IoFailure("failed to read " + path.string());
    return bytes;
}

void write_file_bytes(const fs::path& path, const void* data, std::size_t size) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out) throw IoFailure("failed to write " + path.string());
}

Dtype parse_dtype(const std::string& s) {
    if (s == "f32le") return Dtype::F32le;
    if (s == "u8") return Dtype::U8;
    throw MalformedHeader("header field 'dtype': unknown value '" + s + "'");
}

Semantic parse_semantic(const std::string& s) {
    if (s == "intensity") return Semantic::Intensity;
    if (s == "probability") return Semantic::Probability;
    if (s == "entropy") return Semantic::Entropy;
    if (s == "distance") return Semantic::Distance;
    if (s == "label") return Semantic::Label;
    throw MalformedHeader("header field 'semantic': unknown value '" + s + "'");
}

VolumeHeader parse_header(const fs::path& sidecar) {
    if (!fs::exists(sidecar)) throw MissingFile("header not found: " + sidecar.string());
    std::ifstream in(sidecar);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedHeader("header " + sidecar.string() + ": " + e.what());
    }

    VolumeHeader h;
    try {
        const auto& dims = j.at("dims");
        const auto& spacing = j.at("spacing");
        if (!dims.is_array() || dims.size() != 3)
            throw MalformedHeader("header field 'dims': need 3 entries");
        if (!spacing.is_array() || spacing.size() != 3)
            throw MalformedHeader("header field 'spacing': need 3 entries");
        h.shape = GridShape(dims[0].get<int>(), dims[1].get<int>(), dims[2].get<int>(),
                            spacing[0].get<double>(), spacing[1].get<double>(),
                            spacing[2].get<double>());
        h.dtype = parse_dtype(j.at("dtype").get<std::string>());
        h.semantic = parse_semantic(j.at("semantic").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw MalformedHeader("header " + sidecar.string() + ": " + e.what());
    } catch (const InvalidSpec& e) {
        throw MalformedHeader("header " + sidecar.string() + ": " + e.what());
    }
    return h;
}

void write_header(const VolumeHeader& h, const fs::path& sidecar) {
    ordered_json j;
    j["dims"] = {h.shape.nx, h.shape.ny, h.shape.nz};
    j["spacing"] = {h.shape.sx, h.shape.sy, h.shape.sz};
    j["dtype"] = to_string(h.dtype);
    j["semantic"] = to_string(h.semantic);
    std::ofstream out(sidecar, std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + sidecar.string() + " for writing");
    out << j.dump() << "\n";
    if (!out) throw IoFailure("failed to write " + sidecar.string());
}

std::vector<float> read_f32_payload(const VolumeHeader& h, const fs::path& path) {
    const std::size_t count = h.shape.voxel_count();
    const auto bytes = read_file_bytes(path, count * sizeof(float), "payload");
    std::vector<float> values(count);
    std::memcpy(values.data(), bytes.data(), bytes.size());
    if constexpr (std::endian::native != std::endian::little) byteswap_each(values);
    return values;
}

void validate_float_values(const VolumeHeader& h, const std::vector<float>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        const float v = values[i];
        if (!std::isfinite(v))
            throw ValueOutOfRange("non-finite value at voxel " + std::to_string(i));
        if (h.semantic == Semantic::Probability && (v < 0.0f || v > 1.0f))
            throw ValueOutOfRange("probability " + format_real(v) + " outside [0,1] at voxel " +
                                  std::to_string(i));
    }
}

void check_scalar_header(const VolumeHeader& h) {
    if (h.dtype != Dtype::F32le || h.semantic == Semantic::Label)
        throw MalformedHeader("scalar volumes use dtype f32le with a non-label semantic");
}

void check_label_header(const VolumeHeader& h) {
    if (h.dtype != Dtype::U8 || h.semantic != Semantic::Label)
        throw MalformedHeader("label volumes use dtype u8 with semantic 'label'");
}

} // namespace

const char* to_string(Dtype d) { return d == Dtype::F32le ? "f32le" : "u8"; }

const char* to_string(Semantic s) {
    switch (s) {
        case Semantic::Intensity: return "intensity";
        case Semantic::Probability: return "probability";
        case Semantic::Entropy: return "entropy";
        case Semantic::Distance: return "distance";
        default: return "label";
    }
}

LoadedVolume read_volume(const fs::path& path) {
    const VolumeHeader h = parse_header(path.string() + ".json");
    if (h.dtype == Dtype::U8) {
        check_label_header(h);
        auto bytes = read_file_bytes(path, h.shape.voxel_count(), "payload");
        for (std::size_t i = 0; i < bytes.size(); ++i)
            if (bytes[i] > 1)
                throw ValueOutOfRange("label value " + std::to_string(int(bytes[i])) +
                                      " at voxel " + std::to_string(i));
        return {h, BinaryMask(h.shape, std::move(bytes))};
    }
    check_scalar_header(h);
    const auto values = read_f32_payload(h, path);
    validate_float_values(h, values);
    std::vector<double> widened(values.begin(), values.end());
    return {h, ScalarVolume(h.shape, std::move(widened))};
}

ScalarVolume read_scalar(const fs::path& path) {
    auto loaded = read_volume(path);
    if (!std::holds_alternative<ScalarVolume>(loaded.data))
        throw MalformedHeader("expected a scalar volume at " + path.string());
    return std::get<ScalarVolume>(std::move(loaded.data));
}

BinaryMask read_label(const fs::path& path) {
    auto loaded = read_volume(path);
    if (!std::holds_alternative<BinaryMask>(loaded.data))
        throw MalformedHeader("expected a label volume at " + path.string());
    return std::get<BinaryMask>(std::move(loaded.data));
}

SampleVolume read_sample(const fs::path& path) {
    const VolumeHeader h = parse_header(path.string() + ".json");
    check_scalar_header(h);
    if (h.semantic != Semantic::Probability)
        throw MalformedHeader("sample volume " + path.string() + " must carry semantic 'probability'");
    auto values = read_f32_payload(h, path);
    validate_float_values(h, values);
    return SampleVolume(h.shape, std::move(values));
}

void write_volume(const VolumeHeader& header, const ScalarVolume& vol, const fs::path& path) {
    if (!(header.shape == vol.shape()))
        throw MalformedHeader("write_volume: header shape differs from volume shape");
    check_scalar_header(header);
    std::vector<float> values(vol.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<float>(vol[i]);
    validate_float_values(header, values);
    if constexpr (std::endian::native != std::endian::little) byteswap_each(values);
    write_file_bytes(path, values.data(), values.size() * sizeof(float));
    write_header(header, path.string() + ".json");
}

void write_volume(const VolumeHeader& header, const BinaryMask& mask, const fs::path& path) {
    if (!(header.shape == mask.shape()))
        throw MalformedHeader("write_volume: header shape differs from mask shape");
    check_label_header(header);
    write_file_bytes(path, mask.data().data(), mask.size());
    write_header(header, path.string() + ".json");
}

void write_volume(const VolumeHeader& header, const SampleVolume& vol, const fs::path& path) {
    if (!(header.shape == vol.shape))
        throw MalformedHeader("write_volume: header shape differs from sample shape");
    check_scalar_header(header);
    validate_float_values(header, vol.data);
    if constexpr (std::endian::native == std::endian::little) {
        write_file_bytes(path, vol.data.data(), vol.data.size() * sizeof(float));
    } else {
        auto copy = vol.data;
        byteswap_each(copy);
        write_file_bytes(path, copy.data(), copy.size() * sizeof(float));
    }
    write_header(header, path.string() + ".json");
}

// ---------------------------------------------------------------------------
// manifests

std::vector<CaseManifest> read_manifest(const fs::path& path) {
    if (!fs::exists(path)) throw MissingFile("manifest not found: " + path.string());
    std::ifstream in(path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedHeader("manifest " + path.string() + ": " + e.what());
    }
    const fs::path base = path.parent_path();
    auto resolve = [&](const std::string& p) {
        fs::path fp(p);
        return fp.is_absolute() ? fp : base / fp;
    };

    std::vector<CaseManifest> cases;
    try {
        static constexpr const char* plane_keys[3] = {"axial", "coronal", "sagittal"};
        for (const auto& jc : j.at("cases")) {
            CaseManifest c;
            c.case_id = jc.at("case_id").get<std::string>();
            for (int p = 0; p < 3; ++p)
                for (const auto& f : jc.at(plane_keys[p]))
                    c.plane_samples[p].push_back(resolve(f.get<std::string>()));
            if (jc.contains("ground_truth"))
                c.ground_truth = resolve(jc.at("ground_truth").get<std::string>());
            if (jc.contains("intensity"))
                for (const auto& [name, f] : jc.at("intensity").items())
                    c.intensity[name] = resolve(f.get<std::string>());
            cases.push_back(std::move(c));
        }
    } catch (const nlohmann::json::exception& e) {
        throw MalformedHeader("manifest " + path.string() + ": " + e.what());
    }
    return cases;
}

void write_manifest(const std::vector<CaseManifest>& cases, const fs::path& path) {
    const fs::path base = path.parent_path();
    auto relativize = [&](const fs::path& p) {
        std::error_code ec;
        const fs::path rel = fs::relative(p, base, ec);
        return (ec || rel.empty()) ? p.generic_string() : rel.generic_string();
    };

    ordered_json j;
    j["cases"] = ordered_json::array();
    static constexpr const char* plane_keys[3] = {"axial", "coronal", "sagittal"};
    for (const auto& c : cases) {
        ordered_json jc;
        jc["case_id"] = c.case_id;
        for (int p = 0; p < 3; ++p) {
            auto arr = ordered_json::array();
            for (const auto& f : c.plane_samples[p]) arr.push_back(relativize(f));
            jc[plane_keys[p]] = std::move(arr);
        }
        if (c.ground_truth) jc["ground_truth"] = relativize(*c.ground_truth);
        if (!c.intensity.empty()) {
            ordered_json ji;
            for (const auto& [name, f] : c.intensity) ji[name] = relativize(f);
            jc["intensity"] = std::move(ji);
        }
        j["cases"].push_back(std::move(jc));
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out << j.dump(2) << "\n";
    if (!out) throw IoFailure("failed to write " + path.string());
}

LoadedCase load_case(const CaseManifest& manifest) {
    LoadedCase loaded;
    loaded.case_id = manifest.case_id;

    const std::size_t t = manifest.plane_samples[0].size();
    if (t == 0 && manifest.plane_samples[1].empty() && manifest.plane_samples[2].empty())
        throw EmptySampleList("case " + manifest.case_id + ": no sample volumes listed");
    for (int p = 0; p < 3; ++p)
        if (manifest.plane_samples[p].size() != t)
            throw InconsistentT("case " + manifest.case_id + ": plane " +
                                to_string(static_cast<Plane>(p)) + " lists " +
                                std::to_string(manifest.plane_samples[p].size()) +
                                " samples, expected " + std::to_string(t));

    std::optional<GridShape> shape;
    auto check_shape = [&](const GridShape& s, const fs::path& file) {
        if (!shape) {
            shape = s;
        } else if (!(*shape == s)) {
            throw ShapeMismatch("case " + manifest.case_id + ": " + file.string() +
                                " has shape " + s.to_string() + ", expected " + shape->to_string());
        }
    };

    for (int p = 0; p < 3; ++p) {
        for (const auto& file : manifest.plane_samples[p]) {
            SampleVolume s = read_sample(file);
            check_shape(s.shape, file);
            loaded.samples.planes[p].push_back(std::move(s));
        }
    }
    if (manifest.ground_truth) {
        BinaryMask gt = read_label(*manifest.ground_truth);
        check_shape(gt.shape(), *manifest.ground_truth);
        loaded.ground_truth = std::move(gt);
    }
    for (const auto& [name, file] : manifest.intensity) {
        ScalarVolume v = read_scalar(file);
        check_shape(v.shape(), file);
        loaded.intensity.emplace(name, std::move(v));
    }
    return loaded;
}

// ---------------------------------------------------------------------------
// reports

double report_round(double v) { return std::strtod(format_real(v).c_str(), nullptr); }

namespace {

EmptySegPolicy parse_policy(const std::string& s) {
    return s == "error" ? EmptySegPolicy::Error : EmptySegPolicy::SentinelMax;
}

Connectivity parse_connectivity_str(const std::string& s) {
    if (s == "faces6") return Connectivity::Faces6;
    if (s == "edges18") return Connectivity::Edges18;
    if (s == "full26") return Connectivity::Full26;
    throw MalformedHeader("unknown connectivity '" + s + "'");
}

Quadrant parse_quadrant(const std::string& s) {
    if (s == "TruePositive") return Quadrant::TruePositive;
    if (s == "FalsePositive") return Quadrant::FalsePositive;
    if (s == "FalseNegative") return Quadrant::FalseNegative;
    if (s == "TrueNegative") return Quadrant::TrueNegative;
    throw MalformedHeader("unknown quadrant '" + s + "'");
}

ordered_json report_to_json(const CaseReport& r) {
    ordered_json j;
    j["case_id"] = r.case_id;
    if (std::isinf(r.doubt))
        j["doubt"] = "inf";
    else
        j["doubt"] = report_round(r.doubt);
    j["masked_voxel_count"] = r.masked_voxel_count;
    if (r.dice) j["dice"] = report_round(*r.dice);
    if (r.hd95_mm) j["hd95_mm"] = report_round(*r.hd95_mm);
    if (r.volume_similarity) j["volume_similarity"] = report_round(*r.volume_similarity);
    if (r.flagged) j["flagged"] = *r.flagged;
    if (r.quadrant) j["quadrant"] = to_string(*r.quadrant);
    if (r.error) j["error"] = *r.error;

    ordered_json jc;
    jc["entropy_threshold"] = report_round(r.config.doubt.entropy_threshold);
    jc["dilation_iterations"] = r.config.doubt.dilation_iterations;
    jc["connectivity"] = to_string(r.config.doubt.connectivity);
    jc["empty_segmentation_policy"] =
        r.config.doubt.empty_segmentation_policy == EmptySegPolicy::Error ? "error" : "sentinel_max";
    jc["log_base"] = to_string(r.config.entropy.log_base);
    if (r.config.triage) {
        jc["doubt_threshold"] = report_round(r.config.triage->doubt_threshold);
        jc["dice_threshold"] = report_round(r.config.triage->dice_threshold);
    }
    j["config"] = std::move(jc);
    return j;
}

CaseReport report_from_json(const ordered_json& j) {
    CaseReport r;
    r.case_id = j.at("case_id").get<std::string>();
    const auto& doubt = j.at("doubt");
    r.doubt = doubt.is_string() ? std::numeric_limits<double>::infinity() : doubt.get<double>();
    r.masked_voxel_count = j.at("masked_voxel_count").get<std::int64_t>();
    if (j.contains("dice")) r.dice = j.at("dice").get<double>();
    if (j.contains("hd95_mm")) r.hd95_mm = j.at("hd95_mm").get<double>();
    if (j.contains("volume_similarity")) r.volume_similarity = j.at("volume_similarity").get<double>();
    if (j.contains("flagged")) r.flagged = j.at("flagged").get<bool>();
    if (j.contains("quadrant")) r.quadrant = parse_quadrant(j.at("quadrant").get<std::string>());
    if (j.contains("error")) r.error = j.at("error").get<std::string>();
    if (j.contains("config")) {
        const auto& jc = j.at("config");
        r.config.doubt.entropy_threshold = jc.at("entropy_threshold").get<double>();
        r.config.doubt.dilation_iterations = jc.at("dilation_iterations").get<int>();
        r.config.doubt.connectivity = parse_connectivity_str(jc.at("connectivity").get<std::string>());
        r.config.doubt.empty_segmentation_policy =
            parse_policy(jc.at("empty_segmentation_policy").get<std::string>());
        r.config.entropy.log_base =
            jc.at("log_base").get<std::string>() == "base2" ? LogBase::Base2 : LogBase::Natural;
        if (jc.contains("doubt_threshold")) {
            TriageConfig t;
            t.doubt_threshold = jc.at("doubt_threshold").get<double>();
            t.dice_threshold = jc.at("dice_threshold").get<double>();
            r.config.triage = t;
        }
    }
    return r;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

constexpr const char* kCsvHeader =
    "case_id,doubt,masked_voxel_count,dice,hd95_mm,volume_similarity,flagged,quadrant,error,"
    "entropy_threshold,dilation_iterations,connectivity,empty_segmentation_policy,log_base,"
    "doubt_threshold,dice_threshold";

void write_report_csv(const std::vector<CaseReport>& reports, const fs::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out << kCsvHeader << "\n";
    for (const auto& r : reports) {
        out << csv_escape(r.case_id) << ',' << format_real(r.doubt) << ',' << r.masked_voxel_count
            << ',';
        if (r.dice) out << format_real(*r.dice);
        out << ',';
        if (r.hd95_mm) out << format_real(*r.hd95_mm);
        out << ',';
        if (r.volume_similarity) out << format_real(*r.volume_similarity);
        out << ',';
        if (r.flagged) out << (*r.flagged ? "true" : "false");
        out << ',';
        if (r.quadrant) out << to_string(*r.quadrant);
        out << ',';
        if (r.error) out << csv_escape(*r.error);
        out << ',' << format_real(r.config.doubt.entropy_threshold) << ','
            << r.config.doubt.dilation_iterations << ',' << to_string(r.config.doubt.connectivity)
            << ','
            << (r.config.doubt.empty_segmentation_policy == EmptySegPolicy::Error ? "error"
                                                                                  : "sentinel_max")
            << ',' << to_string(r.config.entropy.log_base) << ',';
        if (r.config.triage) out << format_real(r.config.triage->doubt_threshold);
        out << ',';
        if (r.config.triage) out << format_real(r.config.triage->dice_threshold);
        out << "\n";
    }
    if (!out) throw IoFailure("failed to write " + path.string());
}

} // namespace

void write_report(const std::vector<CaseReport>& reports, const fs::path& path,
                  ReportFormat format) {
    if (format == ReportFormat::Csv) {
        write_report_csv(reports, path);
        return;
    }
    ordered_json j = ordered_json::array();
    for (const auto& r : reports) j.push_back(report_to_json(r));
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
    out << j.dump(2) << "\n";
    if (!out) throw IoFailure("failed to write " + path.string());
}

std::vector<CaseReport> read_report(const fs::path& path) {
    if (!fs::exists(path)) throw MissingFile("report not found: " + path.string());
    std::ifstream in(path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedHeader("report " + path.string() + ": " + e.what());
    }
    std::vector<CaseReport> reports;
    try {
        for (const auto& jr : j) reports.push_back(report_from_json(jr));
    } catch (const nlohmann::json::exception& e) {
        throw MalformedHeader("report " + path.string() + ": " + e.what());
    }
    return reports;
}

} // namespace segqa
