#include "rsvol/perturbation.hpp"

#include <cmath>

#include "rsvol/errors.hpp"

namespace rsvol {
namespace {

// The fit travels by value through serialization, so tolerate rounding at
// the last few digits when matching it against the pricing inputs.
bool close(double a, double b)
{
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace

const char* to_string(PricingModel m)
{
    switch (m) {
    case PricingModel::BlackScholes: return "black_scholes";
    case PricingModel::FouqueStandard: return "fouque_standard";
    case PricingModel::FouqueRegime: return "fouque_regime";
    }
    return "?";
}

double correction_term(const BsInputs& in, double v2, double v3)
{
    if (!(in.tau > 0.0) || !(in.vol > 0.0))
        throw DomainError("correction term requires tau > 0 and vol > 0");
    const GreekSet g = greeks(in);
    const double x = in.spot;
    return -in.tau * (v2 * x * x * g.gamma + v3 * x * x * x * g.speed);
}

PerturbationPrice price_corrected(const BsInputs& in, const SmileFit& fit,
                                  OptionType type)
{
    if (!close(in.vol, fit.sigma_bar))
        throw DataError("input vol " + std::to_string(in.vol)
                        + " does not match fit sigma_bar "
                        + std::to_string(fit.sigma_bar));
    if (!close(in.rate, fit.rate))
        throw DataError("input rate " + std::to_string(in.rate)
                        + " does not match fit rate " + std::to_string(fit.rate));

    PerturbationPrice p;
    p.model = PricingModel::FouqueStandard;
    p.c0 = bs_price(in, type);
    // Gamma and speed coincide for calls and puts, so the same correction
    // applies to both.
    p.correction = correction_term(in, fit.v2, fit.v3);
    p.total = p.c0 + p.correction;
    p.negative_total = p.total < 0.0;
    return p;
}

PerturbationPrice price_with_model(const OptionQuote& quote, PricingModel model,
                                   const std::optional<RegimePricingContext>& ctx,
                                   const SmileFit& fit, double spot, double rate)
{
    BsInputs in;
    in.spot = spot;
    in.strike = quote.strike;
    in.rate = rate;
    in.tau = quote.expiry;

    switch (model) {
    case PricingModel::BlackScholes: {
        in.vol = fit.sigma_bar;
        PerturbationPrice p;
        p.model = PricingModel::BlackScholes;
        p.c0 = bs_price(in, quote.type);
        p.correction = 0.0;
        p.total = p.c0;
        p.negative_total = false;
        return p;
    }
    case PricingModel::FouqueStandard: {
        in.vol = fit.sigma_bar;
        PerturbationPrice p = price_corrected(in, fit, quote.type);
        p.model = PricingModel::FouqueStandard;
        return p;
    }
    case PricingModel::FouqueRegime: {
        if (!ctx)
            throw DataError("regime pricing requested without a regime context");
        if (!(ctx->sigma_bar_i > 0.0))
            throw DataError("regime context has nonpositive sigma_bar_i");
        if (!close(ctx->fit_i.sigma_bar, ctx->sigma_bar_i))
            throw DataError("regime context fit was not computed at sigma_bar_i");
        const Date expiry_date = add_year_fraction(quote.quote_date, quote.expiry);
        if (expiry_date > ctx->next_switch_date)
            throw DataError("intra-regime violation: option expiring "
                            + expiry_date.to_string()
                            + " outlives the next possible regime change on "
                            + ctx->next_switch_date.to_string());
        in.vol = ctx->sigma_bar_i;
        PerturbationPrice p = price_corrected(in, ctx->fit_i, quote.type);
        p.model = PricingModel::FouqueRegime;
        p.regime = ctx->regime_index;
        return p;
    }
    }
    throw DomainError("unknown pricing model");
}

} // namespace rsvol
