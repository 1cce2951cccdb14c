#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "segqa/doubt.hpp"
#include "segqa/entropy.hpp"
#include "segqa/triage.hpp"

namespace segqa {

/// Configuration echoed into every report record so results are
/// reproducible from the report alone.
struct PipelineConfig {
    DoubtConfig doubt;
    EntropyConfig entropy;
    std::optional<TriageConfig> triage;
};

/// Per-case outcome. doubt == +inf is the empty-segmentation sentinel.
/// Metric fields are present iff ground truth was supplied; quadrant
/// additionally needs a triage config.
struct CaseReport {
    std::string case_id;
    double doubt = 0.0;
    std::int64_t masked_voxel_count = 0;
    std::optional<double> dice;
    std::optional<double> hd95_mm;
    std::optional<double> volume_similarity;
    std::optional<bool> flagged;
    std::optional<Quadrant> quadrant;
    std::optional<std::string> error; // set when a stage failed for this case
    PipelineConfig config;
};

/// Review ordering: descending doubt (sentinel first), ties broken by
/// ascending case_id. Cases with an error record sort as sentinel.
std::vector<CaseReport> rank_by_doubt(std::vector<CaseReport> reports);

} // namespace segqa
