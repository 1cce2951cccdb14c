#pragma once

#include <optional>
#include <string>

#include "segqa/doubt.hpp"
#include "segqa/entropy.hpp"
#include "segqa/fusion.hpp"
#include "segqa/metrics.hpp"
#include "segqa/report.hpp"

namespace segqa {

/// Intermediate volumes of one case evaluation, for callers that write them
/// out or inspect them.
struct StageOutputs {
    ScalarVolume fused_probability;
    BinaryMask segmentation;
    ScalarVolume entropy;
};

/// Run fusion -> classification -> entropy -> doubt (-> metrics and triage
/// when available) for one case and assemble its report record.
/// `outputs`, when non-null, receives the intermediate volumes.
CaseReport evaluate_case(const std::string& case_id, const McSampleSet& samples,
                         const BinaryMask* ground_truth, const PipelineConfig& config,
                         StageOutputs* outputs = nullptr);

} // namespace segqa
