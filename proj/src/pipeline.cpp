#include "segqa/pipeline.hpp"

namespace segqa {

CaseReport evaluate_case(const std::string& case_id, const McSampleSet& samples,
                         const BinaryMask* ground_truth, const PipelineConfig& config,
                         StageOutputs* outputs) {
    CaseReport report;
    report.case_id = case_id;
    report.config = config;

    ScalarVolume fused = fuse_probability(samples);
    BinaryMask seg = classify(fused);
    ScalarVolume entropy = predictive_entropy(fused, config.entropy);

    const DoubtBreakdown breakdown = doubt_score(entropy, seg, config.doubt);
    report.doubt = breakdown.dbt;
    report.masked_voxel_count = breakdown.masked_voxel_count;

    if (ground_truth) {
        const MetricSet m = evaluate_metrics(seg, *ground_truth);
        report.dice = m.dice;
        report.hd95_mm = m.hd95_mm;
        report.volume_similarity = m.volume_similarity;
    }
    if (config.triage) {
        report.flagged = flag(report.doubt, *config.triage);
        if (report.dice) report.quadrant = quadrant_of(report.doubt, *report.dice, *config.triage);
    }

    if (outputs) {
        outputs->fused_probability = std::move(fused);
        outputs->segmentation = std::move(seg);
        outputs->entropy = std::move(entropy);
    }
    return report;
}

} // namespace segqa
