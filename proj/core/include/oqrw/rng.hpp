#pragma once

#include <cstdint>
#include <cmath>

namespace oqrw {

/// Counter-based RNG stream (Philox4x32-10). Streams for distinct
/// (master_seed, stream_index) pairs are independent by construction: the
/// stream index occupies the high counter words, so counter ranges of
/// different streams never overlap.
///
/// Consumption contract (stable across versions, relied on by the
/// reproducibility tests): u64() consumes one 64-bit lane; uniform()
/// consumes exactly one u64; normal() exactly two; exponential() exactly
/// one. A Philox block provides two lanes.
class RngStream {
  public:
    RngStream() : RngStream(0, 0) {}
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : key0_(static_cast<std::uint32_t>(master_seed)),
          key1_(static_cast<std::uint32_t>(master_seed >> 32)),
          ctr2_(static_cast<std::uint32_t>(stream_index)),
          ctr3_(static_cast<std::uint32_t>(stream_index >> 32)) {}

    std::uint64_t u64() {
        if (lane_ == 0) {
            fill_block();
            lane_ = 2;
        }
        --lane_;
        return out_[1 - lane_];
    }

    /// Uniform double strictly inside (0, 1).
    double uniform() {
        return (static_cast<double>(u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; consumes exactly two u64.
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Exponential(1); consumes exactly one u64.
    double exponential() { return -std::log(uniform()); }

  private:
    void fill_block() {
        std::uint32_t c0 = static_cast<std::uint32_t>(block_);
        std::uint32_t c1 = static_cast<std::uint32_t>(block_ >> 32);
        std::uint32_t c2 = ctr2_, c3 = ctr3_;
        std::uint32_t k0 = key0_, k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            std::uint64_t p0 = 0xD2511F53ULL * c0;
            std::uint64_t p1 = 0xCD9E8D57ULL * c2;
            std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            c0 = hi1 ^ c1 ^ k0;
            c1 = lo1;
            c2 = hi0 ^ c3 ^ k1;
            c3 = lo0;
            k0 += 0x9E3779B9U;
            k1 += 0xBB67AE85U;
        }
        out_[0] = (static_cast<std::uint64_t>(c1) << 32) | c0;
        out_[1] = (static_cast<std::uint64_t>(c3) << 32) | c2;
        ++block_;
    }

    std::uint32_t key0_, key1_;
    std::uint32_t ctr2_, ctr3_;
    std::uint64_t block_ = 0;
    std::uint64_t out_[2] = {0, 0};
    int lane_ = 0;
};

/// Independent per-trajectory stream for (master seed, trajectory index).
inline RngStream seed_stream(std::uint64_t master_seed, std::uint64_t trajectory_index) {
    return RngStream(master_seed, trajectory_index);
}

}  // namespace oqrw
