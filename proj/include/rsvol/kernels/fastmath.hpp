#pragma once

namespace rsvol::kernels {

// Scalar reference transcendentals for the simulation kernels. These exist
// so the scalar and AVX2 lanes run the *same* polynomial arithmetic in the
// same operation order: libm's exp/log may differ between builds and has no
// vector counterpart with identical rounding, so both lanes share these.
// Pricing code outside the simulator keeps using libm.

/// exp(x) by base-2 argument reduction and a degree-13 polynomial on
/// [-ln2/2, ln2/2]; relative error < 1e-15 over the simulation range.
/// Arguments beyond +-708 saturate to inf/0.
double fast_exp(double x);

/// log(x) by mantissa/exponent split and the atanh series; relative error
/// < 1e-13. x <= 0 returns -inf (0) or NaN (negative).
double fast_log(double x);

/// Inverse standard normal CDF (Acklam's rational approximation, tails via
/// fast_log + sqrt); absolute error ~1.2e-9, plenty below Monte Carlo
/// resolution. p must lie in (0, 1).
double norm_inv(double p);

} // namespace rsvol::kernels
