#include "rsvol/kernels/fastmath.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include "kernel_constants.hpp"

namespace rsvol::kernels {

using namespace detail;

double fast_exp(double x)
{
    if (x != x)
        return x;
    if (x >= kExpSaturate)
        return std::numeric_limits<double>::infinity();
    if (x <= -kExpSaturate)
        return 0.0;

    // x = k ln2 + r with r in [-ln2/2, ln2/2]; the AVX2 lane mirrors every
    // operation below, so keep the order fixed.
    const double t = x * kLog2E;
    const double kd = std::nearbyint(t);
    const double m1 = kd * kLn2Hi;
    const double r_hi = x - m1;
    const double m2 = kd * kLn2Lo;
    const double r = r_hi - m2;

    double p = kExpC[13];
    p = p * r + kExpC[12];
    p = p * r + kExpC[11];
    p = p * r + kExpC[10];
    p = p * r + kExpC[9];
    p = p * r + kExpC[8];
    p = p * r + kExpC[7];
    p = p * r + kExpC[6];
    p = p * r + kExpC[5];
    p = p * r + kExpC[4];
    p = p * r + kExpC[3];
    p = p * r + kExpC[2];
    p = p * r + kExpC[1];
    p = p * r + kExpC[0];

    const auto k = static_cast<std::int64_t>(kd);
    const double scale =
        std::bit_cast<double>(static_cast<std::uint64_t>(k + 1023) << 52);
    return p * scale;
}

double fast_log(double x)
{
    if (x != x)
        return x;
    if (x == 0.0)
        return -std::numeric_limits<double>::infinity();
    if (x < 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    if (x == std::numeric_limits<double>::infinity())
        return x;

    int e_extra = 0;
    if (x < 0x1.0p-1022) { // subnormal: renormalize
        x *= 0x1.0p54;
        e_extra = -54;
    }

    const auto bits = std::bit_cast<std::uint64_t>(x);
    int e = static_cast<int>(bits >> 52) - 1023 + e_extra;
    double m = std::bit_cast<double>((bits & 0x000FFFFFFFFFFFFFull)
                                     | 0x3FF0000000000000ull);
    if (m >= kSqrt2) {
        m *= 0.5;
        e += 1;
    }

    const double s = (m - 1.0) / (m + 1.0);
    const double z = s * s;
    double p = kLogC[7];
    p = p * z + kLogC[6];
    p = p * z + kLogC[5];
    p = p * z + kLogC[4];
    p = p * z + kLogC[3];
    p = p * z + kLogC[2];
    p = p * z + kLogC[1];
    p = p * z + kLogC[0];
    const double log_m = (2.0 * s) * p;

    const double ed = static_cast<double>(e);
    return (ed * kLn2Hi + log_m) + ed * kLn2Lo;
}

namespace {

double norm_inv_tail(double p_small)
{
    // p_small in (0, kNormInvPLow]: the lower-tail rational in
    // q = sqrt(-2 log p).
    const double q = std::sqrt(-2.0 * fast_log(p_small));
    double num = kNormInvC[0];
    num = num * q + kNormInvC[1];
    num = num * q + kNormInvC[2];
    num = num * q + kNormInvC[3];
    num = num * q + kNormInvC[4];
    num = num * q + kNormInvC[5];
    double den = kNormInvD[0];
    den = den * q + kNormInvD[1];
    den = den * q + kNormInvD[2];
    den = den * q + kNormInvD[3];
    den = den * q + 1.0;
    return num / den;
}

} // namespace

double norm_inv(double p)
{
    if (!(p > 0.0) || !(p < 1.0))
        return std::numeric_limits<double>::quiet_NaN();
    if (p < kNormInvPLow)
        return norm_inv_tail(p);
    if (p > kNormInvPHigh)
        return -norm_inv_tail(1.0 - p);

    const double q = p - 0.5;
    const double r = q * q;
    double num = kNormInvA[0];
    num = num * r + kNormInvA[1];
    num = num * r + kNormInvA[2];
    num = num * r + kNormInvA[3];
    num = num * r + kNormInvA[4];
    num = num * r + kNormInvA[5];
    num = num * q;
    double den = kNormInvB[0];
    den = den * r + kNormInvB[1];
    den = den * r + kNormInvB[2];
    den = den * r + kNormInvB[3];
    den = den * r + kNormInvB[4];
    den = den * r + 1.0;
    return num / den;
}

} // namespace rsvol::kernels
