#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace segqa::rng {

/// splitmix64 finalizer: a strong 64-bit mix, used both as a hash and as
/// the core of the counter-based generator below.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Fold an ordered list of key parts (seed, case, plane, sample, ...) into
/// one stream key. Order-sensitive by construction.
constexpr std::uint64_t derive_key(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x853c49e6748fea9bULL;
    for (auto p : parts) h = mix64(h ^ p);
    return h;
}

/// Stateless counter-based stream: value i depends only on (key, i), so
/// generation is reproducible regardless of evaluation order or threading.
class KeyedStream {
public:
    explicit KeyedStream(std::uint64_t key) : key_(key) {}

    std::uint64_t bits(std::uint64_t counter) const { return mix64(key_ ^ mix64(counter)); }

    /// Uniform in (0, 1]: never zero, safe under log().
    double uniform(std::uint64_t counter) const {
        return (static_cast<double>(bits(counter) >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(std::uint64_t counter, double lo, double hi) const {
        return lo + (uniform(counter) - 0x1.0p-53) * (hi - lo);
    }

    /// Standard normal via Box-Muller; consumes counters 2i and 2i+1.
    double gaussian(std::uint64_t counter) const {
        const double u1 = uniform(2 * counter);
        const double u2 = uniform(2 * counter + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    /// Zero-mean unit-variance uniform (range [-sqrt(3), sqrt(3)]); one
    /// counter per draw, much cheaper than gaussian() for white noise that
    /// is smoothed afterwards anyway.
    double unit_variance_uniform(std::uint64_t counter) const {
        return (uniform(counter) - 0.5) * 3.4641016151377544;
    }

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
};

} // namespace segqa::rng
