#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "oracles.hpp"
#include "segqa/io.hpp"

using namespace segqa;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               fs::path("segqa_io_test_" + std::to_string(::getpid()) + "_" +
                        std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

SampleVolume random_sample(const GridShape& g, std::uint64_t key) {
    const rng::KeyedStream stream(key);
    SampleVolume s(g);
    for (std::size_t i = 0; i < s.data.size(); ++i)
        s.data[i] = static_cast<float>(stream.uniform(i));
    return s;
}

} // namespace

TEST_CASE("volume round-trip is bit-identical for f32 and u8 payloads") {
    TempDir dir;
    const GridShape g(5, 6, 7, 0.5, 1.0, 2.0);

    const SampleVolume s = random_sample(g, 17);
    write_volume(VolumeHeader::scalar(g, Semantic::Probability), s, dir.path / "prob.vol");
    const SampleVolume s2 = read_sample(dir.path / "prob.vol");
    CHECK(s2 == s);

    // the double path round-trips exactly for f32-representable values
    const ScalarVolume v = read_scalar(dir.path / "prob.vol");
    write_volume(VolumeHeader::scalar(g, Semantic::Probability), v, dir.path / "prob2.vol");
    CHECK(read_scalar(dir.path / "prob2.vol") == v);

    const BinaryMask m = oracle::random_mask(g, 18, 0.5);
    write_volume(VolumeHeader::label(g), m, dir.path / "label.vol");
    CHECK(read_label(dir.path / "label.vol") == m);
}

TEST_CASE("write is deterministic: identical inputs give identical bytes") {
    TempDir dir;
    const GridShape g = GridShape::cube(6);
    const SampleVolume s = random_sample(g, 23);
    write_volume(VolumeHeader::scalar(g, Semantic::Probability), s, dir.path / "a.vol");
    write_volume(VolumeHeader::scalar(g, Semantic::Probability), s, dir.path / "b.vol");

    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    CHECK(slurp(dir.path / "a.vol") == slurp(dir.path / "b.vol"));
    CHECK(slurp(dir.path / "a.vol.json") == slurp(dir.path / "b.vol.json"));
}

TEST_CASE("probability volume with a value above 1 is rejected") {
    TempDir dir;
    const GridShape g = GridShape::cube(3);
    SampleVolume s(g);
    s.data[5] = 1.5f;
    CHECK_THROWS_AS(write_volume(VolumeHeader::scalar(g, Semantic::Probability), s, dir.path / "bad.vol"),
                    ValueOutOfRange);

    // also rejected on read when smuggled past the writer
    write_volume(VolumeHeader::scalar(g, Semantic::Intensity), s, dir.path / "i.vol");
    auto sidecar = dir.path / "i.vol.json";
    std::ofstream(sidecar) << R"({"dims":[3,3,3],"spacing":[1.0,1.0,1.0],"dtype":"f32le","semantic":"probability"})";
    CHECK_THROWS_AS(read_volume(dir.path / "i.vol"), ValueOutOfRange);
}

TEST_CASE("payload length must match the header dims") {
    TempDir dir;
    const GridShape g = GridShape::cube(4); // 64 voxels
    write_volume(VolumeHeader::scalar(g, Semantic::Intensity), SampleVolume(g), dir.path / "v.vol");
    // truncate payload to 63 voxels
    fs::resize_file(dir.path / "v.vol", 63 * sizeof(float));
    CHECK_THROWS_AS(read_volume(dir.path / "v.vol"), PayloadSizeMismatch);
}

TEST_CASE("malformed and missing headers are reported distinctly") {
    TempDir dir;
    CHECK_THROWS_AS(read_volume(dir.path / "nothing.vol"), MissingFile);

    std::ofstream(dir.path / "x.vol") << "....";
    std::ofstream(dir.path / "x.vol.json") << "{not json";
    CHECK_THROWS_AS(read_volume(dir.path / "x.vol"), MalformedHeader);

    std::ofstream(dir.path / "y.vol") << "....";
    std::ofstream(dir.path / "y.vol.json")
        << R"({"dims":[1,1],"spacing":[1,1,1],"dtype":"f32le","semantic":"intensity"})";
    CHECK_THROWS_AS(read_volume(dir.path / "y.vol"), MalformedHeader);

    std::ofstream(dir.path / "z.vol") << "....";
    std::ofstream(dir.path / "z.vol.json")
        << R"({"dims":[1,1,1],"spacing":[1,1,1],"dtype":"f64","semantic":"intensity"})";
    CHECK_THROWS_AS(read_volume(dir.path / "z.vol"), MalformedHeader);
}

namespace {

// lay out a case on disk: T samples per plane + optional ground truth
CaseManifest write_case(const fs::path& dir, const std::string& id, const GridShape& g, int t,
                        bool with_gt, std::uint64_t key) {
    CaseManifest m;
    m.case_id = id;
    for (int p = 0; p < 3; ++p) {
        for (int i = 0; i < t; ++i) {
            const fs::path f = dir / (id + "_p" + std::to_string(p) + "_t" + std::to_string(i) + ".vol");
            write_volume(VolumeHeader::scalar(g, Semantic::Probability),
                         random_sample(g, key + 100 * p + i), f);
            m.plane_samples[p].push_back(f);
        }
    }
    if (with_gt) {
        const fs::path f = dir / (id + "_gt.vol");
        write_volume(VolumeHeader::label(g), oracle::random_mask(g, key + 999, 0.3), f);
        m.ground_truth = f;
    }
    return m;
}

} // namespace

TEST_CASE("load_case: T=20 per plane with matching shapes loads and validates") {
    TempDir dir;
    const GridShape g = GridShape::cube(8);
    CaseManifest m = write_case(dir.path, "ok", g, 20, true, 4200);

    ScalarVolume t1(g);
    for (std::size_t i = 0; i < t1.size(); ++i) t1[i] = double(i % 97) * 0.5;
    write_volume(VolumeHeader::scalar(g, Semantic::Intensity), t1, dir.path / "t1.vol");
    m.intensity["T1"] = dir.path / "t1.vol";

    const LoadedCase loaded = load_case(m);
    CHECK(loaded.samples.sample_count() == 20);
    CHECK(loaded.samples.shape() == g);
    CHECK(loaded.ground_truth.has_value());
    CHECK(loaded.intensity.count("T1") == 1);
    CHECK_NOTHROW(loaded.samples.validate());
}

TEST_CASE("load_case: unequal plane sample counts raise InconsistentT") {
    TempDir dir;
    const GridShape g = GridShape::cube(4);
    CaseManifest m = write_case(dir.path, "t", g, 3, false, 4300);
    m.plane_samples[1].pop_back(); // coronal now T-1
    CHECK_THROWS_AS(load_case(m), InconsistentT);
}

TEST_CASE("load_case: mixed shapes raise ShapeMismatch, absent files MissingFile") {
    TempDir dir;
    const GridShape g = GridShape::cube(4);
    CaseManifest m = write_case(dir.path, "s", g, 2, false, 4400);
    const fs::path odd = dir.path / "odd.vol";
    write_volume(VolumeHeader::scalar(GridShape::cube(5), Semantic::Probability),
                 SampleVolume(GridShape::cube(5)), odd);
    m.plane_samples[2][1] = odd;
    CHECK_THROWS_AS(load_case(m), ShapeMismatch);

    m.plane_samples[2][1] = dir.path / "gone.vol";
    CHECK_THROWS_AS(load_case(m), MissingFile);
}

TEST_CASE("manifest file round-trips through read_manifest") {
    TempDir dir;
    const GridShape g = GridShape::cube(4);
    std::vector<CaseManifest> cases{write_case(dir.path, "c0", g, 2, true, 4500),
                                    write_case(dir.path, "c1", g, 2, false, 4600)};
    write_manifest(cases, dir.path / "manifest.json");
    const auto back = read_manifest(dir.path / "manifest.json");
    REQUIRE(back.size() == 2);
    CHECK(back[0].case_id == "c0");
    CHECK(back[0].plane_samples[0].size() == 2);
    CHECK(back[0].ground_truth.has_value());
    CHECK_FALSE(back[1].ground_truth.has_value());
    // resolved paths load
    CHECK_NOTHROW(load_case(back[0]));
}

namespace {
CaseReport sample_report() {
    CaseReport r;
    r.case_id = "case_007";
    r.doubt = 123.456789;
    r.masked_voxel_count = 42;
    r.dice = 0.8765432;
    r.hd95_mm = 7.125;
    r.volume_similarity = 0.9501;
    r.flagged = true;
    r.quadrant = Quadrant::FalsePositive;
    r.config.triage = TriageConfig{100.0, 0.75};
    return r;
}
} // namespace

TEST_CASE("report writing: empty and single-record documents") {
    TempDir dir;
    write_report({}, dir.path / "empty.json", ReportFormat::Json);
    CHECK(read_report(dir.path / "empty.json").empty());

    write_report({}, dir.path / "empty.csv", ReportFormat::Csv);
    std::ifstream csv(dir.path / "empty.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header.substr(0, 13) == "case_id,doubt");
    std::string rest;
    CHECK_FALSE(std::getline(csv, rest));

    write_report({sample_report()}, dir.path / "one.json", ReportFormat::Json);
    const auto back = read_report(dir.path / "one.json");
    REQUIRE(back.size() == 1);
    CHECK(back[0].case_id == "case_007");
}

TEST_CASE("report json round-trip preserves every field at 6 significant digits") {
    TempDir dir;
    CaseReport r = sample_report();
    CaseReport failed;
    failed.case_id = "broken";
    failed.error = "doubt: something went wrong";
    CaseReport sentinel;
    sentinel.case_id = "empty_seg";
    sentinel.doubt = DoubtBreakdown::sentinel();

    write_report({r, failed, sentinel}, dir.path / "r.json", ReportFormat::Json);
    const auto back = read_report(dir.path / "r.json");
    REQUIRE(back.size() == 3);

    CHECK(back[0].case_id == r.case_id);
    CHECK(back[0].doubt == report_round(r.doubt));
    CHECK(back[0].masked_voxel_count == r.masked_voxel_count);
    CHECK(back[0].dice.value() == report_round(*r.dice));
    CHECK(back[0].hd95_mm.value() == report_round(*r.hd95_mm));
    CHECK(back[0].volume_similarity.value() == report_round(*r.volume_similarity));
    CHECK(back[0].flagged.value() == true);
    CHECK(back[0].quadrant.value() == Quadrant::FalsePositive);
    CHECK(back[0].config.triage.has_value());
    CHECK(back[0].config.triage->doubt_threshold == 100.0);

    CHECK(back[1].error.value() == "doubt: something went wrong");
    CHECK(std::isinf(back[2].doubt));

    // writing what we read back reproduces the file byte for byte
    write_report(back, dir.path / "r2.json", ReportFormat::Json);
    std::ifstream f1(dir.path / "r.json"), f2(dir.path / "r2.json");
    const std::string s1((std::istreambuf_iterator<char>(f1)), {});
    const std::string s2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(s1 == s2);
}

TEST_CASE("csv report contains one line per case with the sentinel spelled inf") {
    TempDir dir;
    CaseReport sentinel;
    sentinel.case_id = "s";
    sentinel.doubt = DoubtBreakdown::sentinel();
    write_report({sample_report(), sentinel}, dir.path / "r.csv", ReportFormat::Csv);

    std::ifstream csv(dir.path / "r.csv");
    std::string line;
    std::getline(csv, line); // header
    std::getline(csv, line);
    CHECK(line.substr(0, 17) == "case_007,123.457,");
    std::getline(csv, line);
    CHECK(line.substr(0, 6) == "s,inf,");
}
