#include "segqa/entropy.hpp"

#include <algorithm>
#include <cmath>

namespace segqa {

double binary_entropy(double p, LogBase base) {
    if (p <= 0.0 || p >= 1.0) return 0.0; // 0 log 0 := 0
    const double q = 1.0 - p;
    double h;
    double max_h;
    if (base == LogBase::Natural) {
        h = -(p * std::log(p) + q * std::log(q));
        max_h = 0.6931471805599453; // ln 2
    } else {
        h = -(p * std::log2(p) + q * std::log2(q));
        max_h = 1.0;
    }
    // clamp rounding excursions back into the analytic range
    return std::clamp(h, 0.0, max_h);
}

ScalarVolume predictive_entropy(const ScalarVolume& prob, const EntropyConfig& cfg) {
    ScalarVolume out(prob.shape());
    const auto& p = prob.data();
    auto& o = out.data();
    for (std::size_t i = 0; i < p.size(); ++i) o[i] = binary_entropy(p[i], cfg.log_base);
    return out;
}

} // namespace segqa
