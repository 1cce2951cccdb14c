// segqa: batch front end for the fusion / entropy / doubt / metrics / triage
// pipeline. File-in, file-out; every result lands in a machine-readable
// report. Exit codes: 0 success, 1 usage error, 2 data error, 3 internal.

#include <atomic>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "segqa/io.hpp"
#include "segqa/pipeline.hpp"
#include "segqa/synth.hpp"

namespace fs = std::filesystem;
using namespace segqa;

namespace {

struct CommonOpts {
    std::string manifest;
    std::string out_dir = ".";
    std::string format = "json";
    double entropy_threshold = 0.5;
    int dilate_iters = 2;
    std::string connectivity = "faces6";
    std::string log_base = "natural";
    std::string empty_policy = "sentinel_max";
    std::optional<double> doubt_threshold;
    double dice_threshold = 0.75;
    int workers = 1;
};

void add_pipeline_flags(CLI::App* cmd, CommonOpts& o, bool with_manifest = true) {
    if (with_manifest)
        cmd->add_option("--manifest", o.manifest, "case manifest (JSON)")->required();
    cmd->add_option("--out", o.out_dir, "output directory")->required();
    cmd->add_option("--entropy-threshold", o.entropy_threshold,
                    "uncertainty gate for the doubt mask");
    cmd->add_option("--dilate-iters", o.dilate_iters, "outline dilation iterations");
    cmd->add_option("--connectivity", o.connectivity, "structuring element")
        ->check(CLI::IsMember({"faces6", "edges18", "full26"}));
    cmd->add_option("--log-base", o.log_base, "entropy log base")
        ->check(CLI::IsMember({"natural", "base2"}));
    cmd->add_option("--empty-policy", o.empty_policy, "empty-segmentation policy")
        ->check(CLI::IsMember({"sentinel_max", "error"}));
    cmd->add_option("--doubt-threshold", o.doubt_threshold, "flagging threshold (triage)");
    cmd->add_option("--dice-threshold", o.dice_threshold, "quality threshold (triage)");
    cmd->add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--workers", o.workers, "concurrent cases")->check(CLI::PositiveNumber);
}

Connectivity parse_conn(const std::string& s) {
    if (s == "edges18") return Connectivity::Edges18;
    if (s == "full26") return Connectivity::Full26;
    return Connectivity::Faces6;
}

PipelineConfig make_config(const CommonOpts& o, bool want_triage) {
    PipelineConfig cfg;
    cfg.doubt.entropy_threshold = o.entropy_threshold;
    cfg.doubt.dilation_iterations = o.dilate_iters;
    cfg.doubt.connectivity = parse_conn(o.connectivity);
    cfg.doubt.empty_segmentation_policy =
        o.empty_policy == "error" ? EmptySegPolicy::Error : EmptySegPolicy::SentinelMax;
    cfg.entropy.log_base = o.log_base == "base2" ? LogBase::Base2 : LogBase::Natural;
    if (want_triage && o.doubt_threshold)
        cfg.triage = TriageConfig{*o.doubt_threshold, o.dice_threshold};
    return cfg;
}

struct StagePlan {
    bool write_fused = false;
    bool write_entropy = false;
    bool normalize_intensity = false;
    bool compute_doubt = false;
    bool compute_metrics = false;
    bool metrics_required = false;
};

CaseReport process_case(const CaseManifest& manifest, const StagePlan& plan,
                        const PipelineConfig& config, const fs::path& out_dir) {
    CaseReport report;
    report.case_id = manifest.case_id;
    report.config = config;
    std::string stage = "load";
    try {
        const LoadedCase loaded = load_case(manifest);
        const GridShape& shape = loaded.samples.shape();
        const fs::path case_dir = out_dir / manifest.case_id;
        const bool writes_volumes =
            plan.write_fused || plan.write_entropy || plan.normalize_intensity;
        if (writes_volumes) fs::create_directories(case_dir);

        stage = "fuse";
        const ScalarVolume fused = fuse_probability(loaded.samples);
        const BinaryMask seg = classify(fused);
        if (plan.write_fused) {
            write_volume(VolumeHeader::scalar(shape, Semantic::Probability), fused,
                         case_dir / "fused.vol");
            write_volume(VolumeHeader::label(shape), seg, case_dir / "labels.vol");
        }
        if (plan.normalize_intensity) {
            stage = "normalize";
            for (const auto& [name, vol] : loaded.intensity)
                write_volume(VolumeHeader::scalar(shape, Semantic::Intensity),
                             zscore_normalize(vol), case_dir / ("normalized_" + name + ".vol"));
        }

        stage = "entropy";
        const ScalarVolume entropy = predictive_entropy(fused, config.entropy);
        if (plan.write_entropy)
            write_volume(VolumeHeader::scalar(shape, Semantic::Entropy), entropy,
                         case_dir / "entropy.vol");

        if (plan.compute_doubt) {
            stage = "doubt";
            const DoubtBreakdown breakdown = doubt_score(entropy, seg, config.doubt);
            report.doubt = breakdown.dbt;
            report.masked_voxel_count = breakdown.masked_voxel_count;
        }

        if (plan.compute_metrics) {
            stage = "metrics";
            if (!loaded.ground_truth) {
                if (plan.metrics_required)
                    throw MissingFile("ground truth missing from manifest");
            } else {
                const MetricSet m = evaluate_metrics(seg, *loaded.ground_truth);
                report.dice = m.dice;
                report.hd95_mm = m.hd95_mm;
                report.volume_similarity = m.volume_similarity;
            }
        }

        if (plan.compute_doubt && config.triage) {
            stage = "triage";
            report.flagged = flag(report.doubt, *config.triage);
            if (report.dice)
                report.quadrant = quadrant_of(report.doubt, *report.dice, *config.triage);
        }
    } catch (const Error& e) {
        report.error = stage + ": " + e.what();
    }
    return report;
}

int run_batch(const CommonOpts& opts, const StagePlan& plan, bool want_triage,
              bool write_reports) {
    const auto manifests = read_manifest(opts.manifest);
    const PipelineConfig config = make_config(opts, want_triage);
    const fs::path out_dir(opts.out_dir);
    fs::create_directories(out_dir);

    std::vector<CaseReport> reports(manifests.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= manifests.size()) return;
            reports[i] = process_case(manifests[i], plan, config, out_dir);
        }
    };
    const int n_workers =
        std::max(1, std::min<int>(opts.workers, static_cast<int>(manifests.size())));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    if (write_reports) {
        const ReportFormat fmt = opts.format == "csv" ? ReportFormat::Csv : ReportFormat::Json;
        write_report(reports, out_dir / (fmt == ReportFormat::Csv ? "report.csv" : "report.json"),
                     fmt);
    }

    int failures = 0;
    for (const auto& r : reports)
        if (r.error) {
            ++failures;
            std::cerr << "error: case " << r.case_id << " failed at " << *r.error << "\n";
        }
    if (failures) {
        std::cerr << failures << " of " << reports.size() << " cases failed\n";
        return 2;
    }
    std::cout << reports.size() << " cases processed\n";
    return 0;
}

struct SynthOpts {
    std::string out_dir;
    std::uint64_t seed = 0;
    int good = 20;
    int bad = 5;
    int grid = 64;
    double spacing = 1.0;
    int samples = 20;
};

int run_synth(const SynthOpts& o) {
    PhantomSpec base;
    base.grid = GridShape::cube(o.grid, o.spacing);
    base.samples_per_plane = o.samples;
    const auto specs = batch_specs(base, o.good, o.bad, o.seed);

    const fs::path out_dir(o.out_dir);
    fs::create_directories(out_dir);
    std::vector<CaseManifest> manifests;

    for (std::size_t i = 0; i < specs.size(); ++i) {
        const SyntheticCase c = generate_phantom(specs[i]); // one case at a time
        const std::string id = batch_case_id(static_cast<int>(i));
        const fs::path case_dir = out_dir / id;
        fs::create_directories(case_dir);

        CaseManifest m;
        m.case_id = id;
        const GridShape& g = specs[i].grid;
        for (int p = 0; p < 3; ++p) {
            const auto& samples = c.samples.planes[p];
            for (std::size_t t = 0; t < samples.size(); ++t) {
                char name[64];
                std::snprintf(name, sizeof name, "%s_%02zu.vol",
                              to_string(static_cast<Plane>(p)), t);
                const fs::path f = case_dir / name;
                write_volume(VolumeHeader::scalar(g, Semantic::Probability), samples[t], f);
                m.plane_samples[p].push_back(f);
            }
        }
        const fs::path gt = case_dir / "truth.vol";
        write_volume(VolumeHeader::label(g), c.ground_truth, gt);
        m.ground_truth = gt;
        manifests.push_back(std::move(m));
        std::cout << id << ": " << to_string(specs[i].corruption.kind) << "\n";
    }
    write_manifest(manifests, out_dir / "manifest.json");
    std::cout << "wrote " << manifests.size() << " cases to " << out_dir.string() << "\n";
    return 0;
}

int run_triage(const std::string& report_path, const CommonOpts& opts) {
    if (!opts.doubt_threshold) {
        std::cerr << "error: triage requires --doubt-threshold\n";
        return 1;
    }
    const TriageConfig cfg{*opts.doubt_threshold, opts.dice_threshold};
    std::vector<CaseReport> reports = read_report(report_path);
    for (auto& r : reports) {
        r.config.triage = cfg;
        if (!r.error) {
            r.flagged = flag(r.doubt, cfg);
            if (r.dice) r.quadrant = quadrant_of(r.doubt, *r.dice, cfg);
        }
    }
    reports = rank_by_doubt(std::move(reports));

    const fs::path out_dir(opts.out_dir);
    fs::create_directories(out_dir);
    const ReportFormat fmt = opts.format == "csv" ? ReportFormat::Csv : ReportFormat::Json;
    write_report(reports, out_dir / (fmt == ReportFormat::Csv ? "triage.csv" : "triage.json"), fmt);

    std::size_t flagged = 0;
    for (const auto& r : reports) flagged += (r.flagged && *r.flagged) ? 1 : 0;
    std::cout << flagged << " of " << reports.size() << " cases flagged for review\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"uncertainty-driven segmentation QA pipeline"};
    app.require_subcommand(1);

    CommonOpts opts;
    SynthOpts synth_opts;
    std::string report_path;

    auto* fuse = app.add_subcommand("fuse", "fuse MC samples into probability + label volumes");
    add_pipeline_flags(fuse, opts);
    auto* entropy = app.add_subcommand("entropy", "write voxelwise predictive entropy");
    add_pipeline_flags(entropy, opts);
    auto* doubt = app.add_subcommand("doubt", "score cases for review");
    add_pipeline_flags(doubt, opts);
    auto* metrics = app.add_subcommand("metrics", "evaluate against ground truth");
    add_pipeline_flags(metrics, opts);
    auto* run = app.add_subcommand("run", "full pipeline: volumes, doubt, metrics, triage");
    add_pipeline_flags(run, opts);

    auto* triage = app.add_subcommand("triage", "flag, classify and rank an existing report");
    triage->add_option("--report", report_path, "report to triage (JSON)")->required();
    add_pipeline_flags(triage, opts, /*with_manifest=*/false);

    auto* synth = app.add_subcommand("synth", "generate a synthetic verification batch");
    synth->add_option("--out", synth_opts.out_dir, "output directory")->required();
    synth->add_option("--seed", synth_opts.seed, "batch seed");
    synth->add_option("--good", synth_opts.good, "clean cases");
    synth->add_option("--bad", synth_opts.bad, "corrupted cases");
    synth->add_option("--grid", synth_opts.grid, "cubic grid size")->check(CLI::PositiveNumber);
    synth->add_option("--spacing", synth_opts.spacing, "voxel spacing (mm)");
    synth->add_option("--samples", synth_opts.samples, "MC samples per plane")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 1;
    }

    try {
        if (fuse->parsed()) {
            StagePlan plan;
            plan.write_fused = true;
            plan.normalize_intensity = true;
            return run_batch(opts, plan, false, false);
        }
        if (entropy->parsed()) {
            StagePlan plan;
            plan.write_entropy = true;
            return run_batch(opts, plan, false, false);
        }
        if (doubt->parsed()) {
            StagePlan plan;
            plan.compute_doubt = true;
            return run_batch(opts, plan, true, true);
        }
        if (metrics->parsed()) {
            StagePlan plan;
            plan.compute_metrics = true;
            plan.metrics_required = true;
            return run_batch(opts, plan, false, true);
        }
        if (run->parsed()) {
            StagePlan plan;
            plan.write_fused = true;
            plan.write_entropy = true;
            plan.normalize_intensity = true;
            plan.compute_doubt = true;
            plan.compute_metrics = true;
            return run_batch(opts, plan, true, true);
        }
        if (triage->parsed()) return run_triage(report_path, opts);
        if (synth->parsed()) return run_synth(synth_opts);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
