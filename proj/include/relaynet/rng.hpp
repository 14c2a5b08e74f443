#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace relaynet {

/// Philox4x32-10 block function: a keyed bijection of a 128-bit counter.
inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kW0;
            key[1] += kW1;
        }
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

/// Independent random stream addressed by (seed, stream, lane). The output
/// sequence depends only on these three values, so work split across threads
/// reproduces the sequential result exactly.
/// Satisfies UniformRandomBitGenerator.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint32_t stream, std::uint32_t lane = 0)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream), lane_(lane) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (have_ == 0) {
            block_ = philox4x32_10({static_cast<std::uint32_t>(counter_),
                                    static_cast<std::uint32_t>(counter_ >> 32), stream_, lane_},
                                   key_);
            ++counter_;
            have_ = 2;
        }
        const std::size_t i = 2 - have_--;
        return (static_cast<std::uint64_t>(block_[2 * i + 1]) << 32) | block_[2 * i];
    }

    /// Uniform on the open interval (0, 1).
    double uniform() { return ((*this)() >> 11) * 0x1.0p-53 + 0x1.0p-54; }
    bool bernoulli(double p) { return uniform() < p; }
    /// Unit-mean exponential (Rayleigh power fade).
    double exponential() { return -std::log(uniform()); }

private:
    std::array<std::uint32_t, 2> key_;
    std::uint32_t stream_;
    std::uint32_t lane_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int have_ = 0;
};

} // namespace relaynet
