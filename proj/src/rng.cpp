// SPDX-License-Identifier: Apache-2.0
#include "gscm/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace gscm {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
constexpr double kTwoPi = 6.283185307179586476925;

std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t RandomStream::next_u64()
{
    state_ += kGamma;
    return mix64(state_);
}

double RandomStream::uniform()
{
    // 53 random bits centered in (0,1); excludes both endpoints so ln(u) is safe.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform();
}

int RandomStream::uniform_int(int lo, int hi)
{
    if (hi < lo)
        throw std::invalid_argument("uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
}

double RandomStream::normal()
{
    return normal_inv_cdf(uniform());
}

double RandomStream::normal(double mu, double sigma)
{
    if (sigma < 0)
        throw std::invalid_argument("normal: sigma < 0");
    return mu + sigma * normal();
}

double RandomStream::lognormal_base10(double mu_lg, double sigma_lg)
{
    return std::pow(10.0, normal(mu_lg, sigma_lg));
}

double RandomStream::sign()
{
    return (next_u64() & 1u) ? 1.0 : -1.0;
}

RandomStream derive_stream(const StreamKey& key)
{
    std::uint64_t h = mix64(key.master_seed);
    h = mix64(h ^ (static_cast<std::uint64_t>(key.drop) | 0x1000000000000000ull));
    h = mix64(h ^ (static_cast<std::uint64_t>(key.link) | 0x2000000000000000ull));
    h = mix64(h ^ (static_cast<std::uint64_t>(key.module) | 0x4000000000000000ull));
    h = mix64(h ^ (static_cast<std::uint64_t>(key.purpose) | 0x8000000000000000ull));
    return RandomStream(h);
}

double normal_inv_cdf(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("normal_inv_cdf: p outside (0,1)");

    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00, 2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else if (p <= 1 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    } else {
        const double q = std::sqrt(-2 * std::log(1 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }

    // One Halley step against erfc brings the result to near machine precision.
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(kTwoPi) * std::exp(x * x / 2);
    x = x - u / (1 + x * u / 2);
    return x;
}

} // namespace gscm
