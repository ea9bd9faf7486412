#include "jacobi_rare/random.hpp"

#include <cmath>

namespace jrare {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

double RandomStream::uniform_open() {
    // 53 random bits, shifted by half an ulp so 0 is unreachable.
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RandomStream::standard_normal() {
    // Marsaglia polar method; the second variate is discarded so the stream
    // carries no hidden state.
    for (;;) {
        const double u = 2.0 * uniform_open() - 1.0;
        const double v = 2.0 * uniform_open() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }
}

double RandomStream::log_gamma_variate(double shape) {
    // Marsaglia-Tsang for shape >= 1; boosted by U^(1/shape) below 1.
    double boost = 0.0;
    if (shape < 1.0) {
        boost = std::log(uniform_open()) / shape;
        shape += 1.0;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = 0.0;
        double v = 0.0;
        do {
            x = standard_normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform_open();
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
            return std::log(d) + std::log(v) + boost;
        }
    }
}

}  // namespace jrare
