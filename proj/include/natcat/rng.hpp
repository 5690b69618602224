#ifndef NATCAT_RNG_HPP
#define NATCAT_RNG_HPP

#include <cstdint>

namespace natcat::rng {

// SplitMix64 finalizer; the workhorse behind the counter-based generator.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return mix64(mix64(base) ^ (0x2545f4914f6cdd1dULL * (index + 1)));
}

// Stateless counter-based generator: every (stream, counter) pair maps to one
// uniform variate, so parallel consumers get identical numbers regardless of
// the thread count or evaluation order.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : key_(mix64(seed ^ 0x7b1dcdaf13f2c492ULL)) {}

    std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const {
        return mix64(key_ ^ mix64(stream * 0xd1342543de82ef95ULL + 1) ^
                     mix64(counter * 0xaf251af3b0f025b5ULL + 2));
    }

    // Uniform in [0, 1), 53-bit resolution.
    double u01(std::uint64_t stream, std::uint64_t counter) const {
        return static_cast<double>(bits(stream, counter) >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t key_;
};

// Sequential view over one stream of a CounterRng plus the usual samplers.
class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::uint64_t stream = 0)
        : rng_(seed), stream_(stream) {}

    double u01() { return rng_.u01(stream_, counter_++); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }
    std::uint64_t uniform_index(std::uint64_t n) {
        return static_cast<std::uint64_t>(u01() * static_cast<double>(n)) % n;
    }
    bool bernoulli(double p) { return u01() < p; }

    double normal();
    double gamma(double shape, double rate);
    std::uint64_t poisson(double mean);
    // Negative binomial with mean = size * (1 - prob) / prob.
    std::uint64_t negative_binomial(double size, double prob);

private:
    CounterRng rng_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

} // namespace natcat::rng

#endif
