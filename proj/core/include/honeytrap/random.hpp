#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace honeytrap {

/// Seeded random source whose outputs are identical on every platform.
///
/// std::mt19937_64 is fully specified by the standard, but the standard
/// distributions are not, so every draw goes through the helpers below.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Mixes a seed with a stream id so independent consumers (folds,
    /// agents, ...) get decorrelated sequences from one user seed.
    [[nodiscard]] static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) noexcept;

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::size_t index(std::size_t n);

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller.
    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Poisson count; exact (Knuth) for small means, rounded normal above 30.
    std::uint64_t poisson(double mean);

    /// Index drawn with probability proportional to `weights` (all >= 0, sum > 0).
    std::size_t categorical(std::span<const double> weights);

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[index(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace honeytrap
