#ifndef FSARD_RNG_HPP
#define FSARD_RNG_HPP

#include <cstdint>
#include <random>

namespace fsard {

// Deterministic random stream: mt19937_64 plus hand-rolled uniform mappings,
// so (seed, replication) -> output is identical on every platform. The
// standard distributions are implementation-defined and are not used.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed),
                          static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream),
                          static_cast<std::uint32_t>(stream >> 32)};
        engine_.seed(seq);
    }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // uniform in {0, ..., n-1}; modulo bias is below n / 2^64
    int next_below(int n) {
        return static_cast<int>(engine_() % static_cast<std::uint64_t>(n));
    }

    bool bernoulli(double p) { return next_double() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace fsard

#endif  // FSARD_RNG_HPP
