#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace stamp {

// SplitMix64. Every seeded decision in the toolkit draws from this generator
// with the reductions below, so plans are reproducible bit-for-bit from the
// seed in any language.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, n) by 128-bit multiply-shift: (next() * n) >> 64. n must be > 0.
    std::uint64_t uniform(std::uint64_t n) noexcept {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    /// Uniform in [0, 1) from the top 53 bits.
    double uniform_unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Fisher-Yates, swapping i with uniform(i + 1) for i = n-1 down to 1.
    template <typename T>
    void shuffle(std::vector<T>& items) noexcept {
        for (std::size_t i = items.size(); i-- > 1;) {
            std::swap(items[i], items[uniform(i + 1)]);
        }
    }

private:
    std::uint64_t state_;
};

/// Per-item seed: first SplitMix64 output for state seed ^ item.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t item) noexcept {
    return SplitMix64(seed ^ item).next();
}

}  // namespace stamp
