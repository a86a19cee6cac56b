#pragma once

#include <functional>

#include "rsvol/market_data.hpp"

namespace rsvol {

/// Inputs to the constant-volatility pricing kernel.
struct BsInputs {
    double spot = 0.0;   // x, > 0
    double strike = 0.0; // K, > 0
    double rate = 0.0;   // r, per year
    double vol = 0.0;    // sigma, per sqrt(year), >= 0
    double tau = 0.0;    // T - s, years, >= 0
};

/// The three sensitivities used by the smile expansion and the correction
/// term: gamma = d2C/dx2, speed = d3C/dx3, vega = dC/dsigma. Gamma and vega
/// are identical for calls and puts, and so are all higher x-derivatives.
struct GreekSet {
    double gamma = 0.0; // per currency^2, >= 0
    double speed = 0.0; // per currency^3
    double vega = 0.0;  // currency per vol unit, >= 0
};

double norm_pdf(double x);

/// Standard normal CDF via erfc; absolute error below 1e-15 across the
/// real line, which is what table-level price agreement needs.
double norm_cdf(double x);

/// d1 of the Black-Scholes formula; requires vol > 0 and tau > 0.
double bs_d1(const BsInputs& in);

/// European Black-Scholes price. tau = 0 returns intrinsic value; vol = 0
/// returns the deterministic discounted payoff. Put and call satisfy
/// put-call parity exactly.
double bs_price(const BsInputs& in, OptionType type);

/// Closed-form gamma, speed and vega:
///   gamma = phi(d1) / (x sigma sqrt(tau))
///   speed = -(gamma / x) (1 + d1 / (sigma sqrt(tau)))
///   vega  = x phi(d1) sqrt(tau)
/// Throws DomainError for tau = 0 or vol = 0 (the formulas are singular
/// there even though the price itself has a limit).
GreekSet greeks(const BsInputs& in);

/// Root of bs_price(sigma) = price, bracketed on [1e-6, 5.0] and polished
/// with safeguarded Newton steps (vega), 200-iteration cap. Requires the
/// price strictly inside the no-arbitrage band; the error message says
/// which bound failed. `in.vol` is ignored.
double implied_vol(double price, const BsInputs& in, OptionType type);

/// Constant-volatility equivalent of a time-dependent variance curve:
///   sigma_c = sqrt( (1/(T-t)) * integral_t^T sigma^2(u) du ),
/// integral by adaptive Simpson quadrature with relative tolerance 1e-10.
/// Throws DomainError if T <= t.
double constant_vol_equivalent(const std::function<double(double)>& sigma_sq_fn,
                               double t, double T);

} // namespace rsvol
