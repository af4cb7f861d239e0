// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace gscm {

/// Identifies one logical random stream. Distinct tag tuples give statistically
/// independent streams; the mapping is pure, so draws never depend on the order
/// in which links are processed.
struct StreamKey
{
    std::uint64_t master_seed = 0;
    std::uint32_t drop = 0;
    std::uint32_t link = 0;
    std::uint32_t module = 0;
    std::uint32_t purpose = 0;
};

// Module tags used throughout the pipeline.
namespace stream_module {
inline constexpr std::uint32_t kDrop = 1;
inline constexpr std::uint32_t kLinkState = 2;
inline constexpr std::uint32_t kLsp = 3;
inline constexpr std::uint32_t kSmallScale = 4;
inline constexpr std::uint32_t kPolarization = 5;
inline constexpr std::uint32_t kAntenna = 6;
inline constexpr std::uint32_t kNearField = 7;
inline constexpr std::uint32_t kSns = 8;
inline constexpr std::uint32_t kCoeff = 9;
inline constexpr std::uint32_t kToa = 10;
} // namespace stream_module

/// Counter-based uniform 64-bit generator (SplitMix64). Value-like and cheap to
/// copy; the state is just the counter, so streams derived from the same key
/// replay identically.
class RandomStream
{
  public:
    RandomStream() = default;
    explicit RandomStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();

    /// Uniform on the open interval (0, 1); never returns 0 or 1.
    double uniform();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);
    /// Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi);
    /// Standard normal via inverse CDF (deterministic, documented transform).
    double normal();
    double normal(double mu, double sigma);
    /// 10^X with X ~ N(mu_lg, sigma_lg^2); base-10 convention used everywhere.
    double lognormal_base10(double mu_lg, double sigma_lg);
    /// Random sign, +1 or -1.
    double sign();

  private:
    std::uint64_t state_ = 0;
};

/// Derives the stream for a key by hashing the tag tuple into the seed.
RandomStream derive_stream(const StreamKey& key);

/// Inverse of the standard normal CDF (Acklam's rational approximation with a
/// Halley refinement step); p must be in (0, 1).
double normal_inv_cdf(double p);

} // namespace gscm
