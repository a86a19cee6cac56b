#pragma once

// Shared constants for the scalar and AVX2 math kernels. Both lanes must
// evaluate the same polynomials in the same operation order, so every
// coefficient lives here exactly once.

namespace rsvol::kernels::detail {

// exp: base-2 reduction constants.
inline constexpr double kLog2E = 1.44269504088896340736;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kExpSaturate = 708.0;

// exp: Taylor coefficients 1/k! for the degree-13 polynomial on
// [-ln2/2, ln2/2]; truncation error is below 1e-17 relative there.
inline constexpr double kExpC[14] = {
    1.0,                      // 1/0!
    1.0,                      // 1/1!
    1.0 / 2.0,
    1.0 / 6.0,
    1.0 / 24.0,
    1.0 / 120.0,
    1.0 / 720.0,
    1.0 / 5040.0,
    1.0 / 40320.0,
    1.0 / 362880.0,
    1.0 / 3628800.0,
    1.0 / 39916800.0,
    1.0 / 479001600.0,
    1.0 / 6227020800.0,
};

// log: atanh-series coefficients 1/(2k+1); s = (m-1)/(m+1) with
// m in [sqrt(2)/2, sqrt(2)) keeps |s| <= 0.1716.
inline constexpr double kSqrt2 = 1.41421356237309514547;
inline constexpr double kLogC[8] = {
    1.0,
    1.0 / 3.0,
    1.0 / 5.0,
    1.0 / 7.0,
    1.0 / 9.0,
    1.0 / 11.0,
    1.0 / 13.0,
    1.0 / 15.0,
};

// Inverse normal CDF (Acklam's rational approximation).
inline constexpr double kNormInvA[6] = {
    -3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
    1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00,
};
inline constexpr double kNormInvB[5] = {
    -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
    6.680131188771972e+01,  -1.328068155288572e+01,
};
inline constexpr double kNormInvC[6] = {
    -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
    -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00,
};
inline constexpr double kNormInvD[4] = {
    7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
    3.754408661907416e+00,
};
inline constexpr double kNormInvPLow = 0.02425;
inline constexpr double kNormInvPHigh = 1.0 - kNormInvPLow;

} // namespace rsvol::kernels::detail
