#pragma once

#include <optional>

#include "rsvol/black_scholes.hpp"
#include "rsvol/date.hpp"
#include "rsvol/smile.hpp"

namespace rsvol {

enum class PricingModel { BlackScholes, FouqueStandard, FouqueRegime };

const char* to_string(PricingModel m);

/// Corrected price decomposition. total = c0 + correction always;
/// BlackScholes mode carries a zero correction. A negative total is
/// flagged, never clamped — it signals the expansion overshooting.
struct PerturbationPrice {
    double c0 = 0.0;
    double correction = 0.0;
    double total = 0.0;
    PricingModel model = PricingModel::BlackScholes;
    std::optional<int> regime;
    bool negative_total = false;
};

/// Everything needed to price intra-regime: the regime's effective
/// volatility, the smile fit computed with it, and the first date at which
/// the regime may switch (options expiring later are refused).
struct RegimePricingContext {
    int regime_index = 0;
    double sigma_bar_i = 0.0;
    SmileFit fit_i;
    Date next_switch_date;
};

/// First-order correction: -tau * (v2 x^2 gamma + v3 x^3 speed), with
/// gamma/speed evaluated at sigma = in.vol (the effective volatility).
/// Requires tau > 0 and vol > 0.
double correction_term(const BsInputs& in, double v2, double v3);

/// c0 = bs_price at sigma_bar plus the correction from the fit. The fit's
/// sigma_bar and rate must match the inputs (DataError otherwise).
PerturbationPrice price_corrected(const BsInputs& in, const SmileFit& fit,
                                  OptionType type);

/// Prices one quote under the requested model:
///  - BlackScholes: c0 at the fit's sigma_bar, zero correction;
///  - FouqueStandard: corrected with the global fit;
///  - FouqueRegime: corrected with ctx's regime fit (sigma_bar_i); the
///    quote must expire on or before ctx.next_switch_date.
PerturbationPrice price_with_model(const OptionQuote& quote, PricingModel model,
                                   const std::optional<RegimePricingContext>& ctx,
                                   const SmileFit& fit, double spot, double rate);

} // namespace rsvol
