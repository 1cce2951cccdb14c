#include "segqa/doubt.hpp"

#include "segqa/edt.hpp"
#include "segqa/morphology.hpp"

namespace segqa {

BinaryMask exclusion_mask(const BinaryMask& seg, const ScalarVolume& entropy,
                          const DoubtConfig& cfg) {
    detail::require_same_shape(seg.shape(), entropy.shape(), "exclusion_mask");
    BinaryMask band = outline(seg, cfg.connectivity);
    if (cfg.dilation_iterations > 0 && !band.empty_foreground())
        band = dilate(band, cfg.connectivity, cfg.dilation_iterations);
    return mask_and(invert(band), threshold(entropy, cfg.entropy_threshold));
}

ScalarVolume distance_weight(const BinaryMask& seg, Connectivity conn) {
    const BinaryMask surface = outline(seg, conn);
    if (surface.empty_foreground())
        throw EmptySegmentation("distance_weight: segmentation has no outline");
    return edt(surface);
}

DoubtBreakdown doubt_score(const ScalarVolume& entropy, const BinaryMask& seg,
                           const DoubtConfig& cfg) {
    detail::require_same_shape(seg.shape(), entropy.shape(), "doubt_score");

    const BinaryMask surface = outline(seg, cfg.connectivity);
    const BinaryMask k = exclusion_mask(seg, entropy, cfg);

    DoubtBreakdown breakdown;
    breakdown.outline_voxel_count = static_cast<std::int64_t>(surface.foreground_count());
    breakdown.masked_voxel_count = static_cast<std::int64_t>(k.foreground_count());

    if (surface.empty_foreground()) {
        // distance weight undefined: no outline to measure from
        if (cfg.empty_segmentation_policy == EmptySegPolicy::Error)
            throw EmptySegmentation("doubt_score: segmentation has no outline");
        breakdown.dbt = DoubtBreakdown::sentinel();
        return breakdown;
    }

    const ScalarVolume w = edt(surface);
    const auto& kd = k.data();
    const auto& wd = w.data();
    const auto& hd = entropy.data();
    double sum = 0.0; // fixed linear order keeps the score deterministic
    double max_term = 0.0;
    for (std::size_t i = 0; i < kd.size(); ++i) {
        if (!kd[i]) continue;
        const double term = wd[i] * hd[i];
        sum += term;
        if (term > max_term) max_term = term;
    }
    breakdown.dbt = sum;
    breakdown.max_weighted_term = max_term;
    return breakdown;
}

} // namespace segqa
