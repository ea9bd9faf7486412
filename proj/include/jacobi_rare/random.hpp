#pragma once

#include <cstdint>
#include <random>

namespace jrare {

/// SplitMix64 finalizer; used to derive independent seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of the stream owned by replication `index` under `master_seed`.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

/// A random stream. Wraps std::mt19937_64 (whose output sequence is fixed by
/// the standard) and draws every variate through our own transforms, so a
/// seed reproduces the same numbers on any conforming toolchain.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    static RandomStream for_replication(std::uint64_t master_seed, std::uint64_t index) {
        return RandomStream(derive_seed(master_seed, index));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1).
    double uniform_open();

    double standard_normal();

    /// Gamma(shape, 1) returned as its logarithm; stays finite for tiny shapes.
    double log_gamma_variate(double shape);

private:
    std::mt19937_64 engine_;
};

}  // namespace jrare
