#pragma once

#include <cstdint>
#include <limits>

namespace censtest {

// Counter-based pseudo-random generator (splitmix64). Streams are derived
// from (seed, index) pairs, so work items can run in any order, on any number
// of threads, and still consume identical random sequences.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Unbiased uniform integer on [0, n).
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = (*this)();
            if (r >= threshold) return r % n;
        }
    }

private:
    std::uint64_t state_;
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
}  // namespace detail

// Statistically independent stream for work item `index` under `seed`.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(detail::mix64(seed + 0x9e3779b97f4a7c15ull) ^
                      detail::mix64(index + 0xbf58476d1ce4e5b9ull));
}

inline SplitMix64 substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return substream(detail::mix64(seed + 0x94d049bb133111ebull) ^ detail::mix64(a), b);
}

}  // namespace censtest
