#pragma once

#include <cstdint>
#include <limits>

namespace hhwalk {

/// PCG32 (XSH-RR output, 64-bit LCG state) with selectable stream.
///
/// Every stochastic routine in the library draws from this generator so that
/// a (seed, stream) pair pins a run bit-for-bit on any platform.
class Pcg32 {
public:
    using result_type = std::uint32_t;

    static constexpr const char* algorithm_name = "pcg32-xsh-rr";

    explicit Pcg32(std::uint64_t seed = 0x853c49e6748fea9bULL, std::uint64_t stream = 0xda3e39cb94b95bdbULL)
    {
        seed_stream(seed, stream);
    }

    void seed_stream(std::uint64_t seed, std::uint64_t stream)
    {
        state_ = 0;
        inc_ = (stream << 1u) | 1u;
        next_u32();
        state_ += seed;
        next_u32();
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return next_u32(); }

    std::uint32_t next_u32()
    {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        const auto rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    std::uint64_t next_u64()
    {
        const std::uint64_t hi = next_u32();
        return (hi << 32u) | next_u32();
    }

    /// Uniform double in [0, 1) with 53 bits of resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11u) * 0x1.0p-53; }

    /// Unbiased integer in [0, bound) (Lemire's multiply-shift with rejection).
    std::uint32_t bounded(std::uint32_t bound)
    {
        std::uint64_t m = static_cast<std::uint64_t>(next_u32()) * bound;
        auto low = static_cast<std::uint32_t>(m);
        if (low < bound) {
            const std::uint32_t threshold = (0u - bound) % bound;
            while (low < threshold) {
                m = static_cast<std::uint64_t>(next_u32()) * bound;
                low = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32u);
    }

private:
    std::uint64_t state_ = 0;
    std::uint64_t inc_ = 0;
};

} // namespace hhwalk
