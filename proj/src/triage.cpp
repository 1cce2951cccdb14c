#include "segqa/triage.hpp"

#include <algorithm>

#include "segqa/report.hpp"

namespace segqa {

const char* to_string(Quadrant q) {
    switch (q) {
        case Quadrant::TruePositive: return "TruePositive";
        case Quadrant::FalsePositive: return "FalsePositive";
        case Quadrant::FalseNegative: return "FalseNegative";
        default: return "TrueNegative";
    }
}

bool flag(double doubt, const TriageConfig& cfg) {
    return doubt > cfg.doubt_threshold; // strict "above"; +inf sentinel always flags
}

Quadrant quadrant_of(double doubt, double dice, const TriageConfig& cfg) {
    const bool flagged = flag(doubt, cfg);
    const bool needs_improvement = dice < cfg.dice_threshold; // boundary dice counts as good
    if (flagged) return needs_improvement ? Quadrant::TruePositive : Quadrant::FalsePositive;
    return needs_improvement ? Quadrant::FalseNegative : Quadrant::TrueNegative;
}

std::vector<CaseReport> rank_by_doubt(std::vector<CaseReport> reports) {
    auto sort_key = [](const CaseReport& r) {
        // failed cases could not be scored; surface them like sentinels
        return r.error ? DoubtBreakdown::sentinel() : r.doubt;
    };
    std::sort(reports.begin(), reports.end(), [&](const CaseReport& a, const CaseReport& b) {
        const double da = sort_key(a), db = sort_key(b);
        if (da != db) return da > db;
        return a.case_id < b.case_id;
    });
    return reports;
}

} // namespace segqa
