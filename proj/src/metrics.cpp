#include "segqa/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "segqa/edt.hpp"
#include "segqa/morphology.hpp"

namespace segqa {

double dice(const BinaryMask& pred, const BinaryMask& gt) {
    detail::require_same_shape(pred.shape(), gt.shape(), "dice");
    std::size_t a = 0, b = 0, both = 0;
    const auto& pd = pred.data();
    const auto& gd = gt.data();
    for (std::size_t i = 0; i < pd.size(); ++i) {
        a += pd[i];
        b += gd[i];
        both += static_cast<std::size_t>(pd[i] & gd[i]);
    }
    if (a + b == 0) return 1.0; // both empty: perfect agreement by convention
    return 2.0 * static_cast<double>(both) / static_cast<double>(a + b);
}

double volume_similarity(const BinaryMask& pred, const BinaryMask& gt) {
    detail::require_same_shape(pred.shape(), gt.shape(), "volume_similarity");
    const auto a = static_cast<double>(pred.foreground_count());
    const auto b = static_cast<double>(gt.foreground_count());
    if (a + b == 0.0) return 1.0;
    return 1.0 - std::abs(a - b) / (a + b);
}

double percentile(std::vector<double> values, double pct) {
    if (values.empty()) throw EmptyMask("percentile: no values");
    std::sort(values.begin(), values.end());
    const double rank = pct / 100.0 * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(rank);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = rank - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

double hd95(const BinaryMask& pred, const BinaryMask& gt) {
    detail::require_same_shape(pred.shape(), gt.shape(), "hd95");
    if (pred.empty_foreground()) throw EmptyMask("hd95: predicted mask is empty");
    if (gt.empty_foreground()) throw EmptyMask("hd95: ground-truth mask is empty");

    const BinaryMask surf_pred = outline(pred);
    const BinaryMask surf_gt = outline(gt);
    if (surf_pred.empty_foreground() || surf_gt.empty_foreground())
        throw EmptyMask("hd95: mask covers the whole grid, no surface to measure");

    const ScalarVolume dist_to_gt = edt(surf_gt);
    const ScalarVolume dist_to_pred = edt(surf_pred);

    std::vector<double> pooled;
    pooled.reserve(surf_pred.foreground_count() + surf_gt.foreground_count());
    for (std::size_t i = 0; i < surf_pred.size(); ++i)
        if (surf_pred[i]) pooled.push_back(dist_to_gt[i]);
    for (std::size_t i = 0; i < surf_gt.size(); ++i)
        if (surf_gt[i]) pooled.push_back(dist_to_pred[i]);

    return percentile(std::move(pooled), 95.0);
}

MetricSet evaluate_metrics(const BinaryMask& pred, const BinaryMask& gt) {
    return {dice(pred, gt), hd95(pred, gt), volume_similarity(pred, gt)};
}

} // namespace segqa
