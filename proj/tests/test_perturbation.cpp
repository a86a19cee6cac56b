#include <doctest.h>

#include <cmath>

#include "rsvol/errors.hpp"
#include "rsvol/perturbation.hpp"

using namespace rsvol;

namespace {

SmileFit fit_from(double v2, double v3, double sigma_bar, double rate)
{
    return make_smile_fit(line_from_coefficients(v2, v3, sigma_bar, rate), 10,
                          sigma_bar, rate);
}

} // namespace

TEST_CASE("correction term basics")
{
    const BsInputs in{100, 100, 0.0, 0.2, 0.5};
    CHECK(correction_term(in, 0.0, 0.0) == 0.0);

    // Vanishing prefactor as tau -> 0: the net scale is sqrt(tau) since
    // gamma and speed grow like 1/sqrt(tau).
    BsInputs tiny = in;
    tiny.tau = 1e-8;
    CHECK(std::abs(correction_term(tiny, 1e-6, -1e-6)) <= 1e-6);
    double prev = std::abs(correction_term(tiny, 0.01, -0.005));
    for (double tau : {1e-10, 1e-12, 1e-14}) {
        tiny.tau = tau;
        const double cur = std::abs(correction_term(tiny, 0.01, -0.005));
        CHECK(cur < prev);
        prev = cur;
    }

    // Independent composition of the closed forms in long double:
    // gamma = e^{-d1^2/2} / (x sb sqrt(2 pi tau)),
    // speed = -gamma/x (1 + d1/(sb sqrt(tau))).
    const long double x = 100.0L, k = 100.0L, sb = 0.2L, tau = 0.5L;
    const long double d1 =
        (logl(x / k) + (0.0L + 0.5L * sb * sb) * tau) / (sb * sqrtl(tau));
    const long double gamma =
        expl(-0.5L * d1 * d1) / (x * sb * sqrtl(2.0L * M_PIl * tau));
    const long double speed = -(gamma / x) * (1.0L + d1 / (sb * sqrtl(tau)));
    const long double v2 = 0.01L, v3 = -0.005L;
    const long double expected = -tau * (v2 * x * x * gamma + v3 * x * x * x * speed);
    CHECK(correction_term(in, 0.01, -0.005)
          == doctest::Approx(static_cast<double>(expected)).epsilon(1e-12));

    BsInputs bad = in;
    bad.tau = 0.0;
    CHECK_THROWS_AS((void)correction_term(bad, 0.01, 0.0), DomainError);
}

TEST_CASE("price_corrected decomposes exactly and checks consistency")
{
    const SmileFit fit = fit_from(0.004, -0.002, 0.2, 0.03);
    const BsInputs in{100, 105, 0.03, 0.2, 0.3};
    const PerturbationPrice p = price_corrected(in, fit, OptionType::Call);
    CHECK(p.total == p.c0 + p.correction); // exact, by construction
    CHECK(p.c0 == bs_price(in, OptionType::Call));
    CHECK(p.correction == correction_term(in, fit.v2, fit.v3));

    BsInputs wrong_vol = in;
    wrong_vol.vol = 0.25;
    CHECK_THROWS_AS((void)price_corrected(wrong_vol, fit, OptionType::Call),
                    DataError);
    BsInputs wrong_rate = in;
    wrong_rate.rate = 0.05;
    CHECK_THROWS_AS((void)price_corrected(wrong_rate, fit, OptionType::Call),
                    DataError);
}

TEST_CASE("flat smile gives the Black-Scholes price back")
{
    const double sb = 0.17;
    const SmileFit flat = make_smile_fit(SmileLine{0.0, sb, 0.0}, 5, sb, 0.02);
    const BsInputs in{100, 98, 0.02, sb, 0.4};
    const PerturbationPrice p = price_corrected(in, flat, OptionType::Call);
    CHECK(std::abs(p.total - bs_price(in, OptionType::Call)) <= 1e-12);
    CHECK(p.correction == 0.0);
}

TEST_CASE("correction is linear in (v2, v3)")
{
    const BsInputs in{100, 103, 0.01, 0.25, 0.6};
    const double base = correction_term(in, 0.003, -0.001);
    for (double lam : {0.0, 0.5, 2.0, -3.0})
        CHECK(std::abs(correction_term(in, lam * 0.003, lam * -0.001) - lam * base)
              <= 1e-12 * std::max(1.0, std::abs(base)));
}

TEST_CASE("put correction reuses the call's x-derivatives")
{
    const SmileFit fit = fit_from(0.002, -0.004, 0.22, 0.04);
    const BsInputs in{100, 101, 0.04, 0.22, 0.5};
    const PerturbationPrice call = price_corrected(in, fit, OptionType::Call);
    const PerturbationPrice put = price_corrected(in, fit, OptionType::Put);
    CHECK(call.correction == put.correction);
    // Parity carries over to the corrected totals.
    const double rhs = in.spot - in.strike * std::exp(-in.rate * in.tau);
    CHECK(std::abs((call.total - put.total) - rhs) <= 1e-12);
}

TEST_CASE("negative totals are flagged, not clamped")
{
    const SmileFit fit = fit_from(5.0, 0.0, 0.2, 0.0); // absurd coefficient
    const BsInputs in{100, 100, 0.0, 0.2, 0.9};
    const PerturbationPrice p = price_corrected(in, fit, OptionType::Call);
    CHECK(p.negative_total);
    CHECK(p.total < 0.0);
    CHECK(p.total == p.c0 + p.correction);
}

TEST_CASE("price_with_model dispatches the three methods")
{
    OptionQuote q;
    q.quote_date = Date::from_ymd(2003, 4, 29);
    q.expiry = 0.14;
    q.strike = 890.0;
    q.bid = q.ask = 43.3;

    const double spot = 900.0, rate = 0.02;
    const SmileFit global = fit_from(0.001, -0.0005, 0.1277, rate);

    SUBCASE("BlackScholes mode: plain price at sigma_bar, zero correction")
    {
        const auto p = price_with_model(q, PricingModel::BlackScholes, std::nullopt,
                                        global, spot, rate);
        CHECK(p.correction == 0.0);
        CHECK(p.total
              == bs_price({spot, q.strike, rate, 0.1277, q.expiry}, OptionType::Call));
        CHECK(p.model == PricingModel::BlackScholes);
    }

    SUBCASE("FouqueStandard mode: corrected with the global fit")
    {
        const auto p = price_with_model(q, PricingModel::FouqueStandard, std::nullopt,
                                        global, spot, rate);
        CHECK(p.total == p.c0 + p.correction);
        CHECK(p.correction != 0.0);
    }

    SUBCASE("FouqueRegime mode: regime 1 prices at sigma_bar_1 = 0.116")
    {
        RegimePricingContext ctx;
        ctx.regime_index = 1;
        ctx.sigma_bar_i = 0.116;
        ctx.fit_i = fit_from(0.001, -0.0005, 0.116, rate);
        ctx.next_switch_date = Date::from_ymd(2004, 1, 1);
        const auto p = price_with_model(q, PricingModel::FouqueRegime, ctx, global,
                                        spot, rate);
        CHECK(p.regime == 1);
        CHECK(p.c0
              == bs_price({spot, q.strike, rate, 0.116, q.expiry}, OptionType::Call));
    }

    SUBCASE("regime mode guards the intra-regime restriction")
    {
        RegimePricingContext ctx;
        ctx.regime_index = 1;
        ctx.sigma_bar_i = 0.116;
        ctx.fit_i = fit_from(0.0, 0.0, 0.116, rate);
        ctx.next_switch_date = add_year_fraction(q.quote_date, 0.5);
        OptionQuote long_dated = q;
        long_dated.expiry = 1.2;
        CHECK_THROWS_WITH_AS((void)price_with_model(long_dated,
                                                    PricingModel::FouqueRegime, ctx,
                                                    global, spot, rate),
                             doctest::Contains("intra-regime"), DataError);
    }

    SUBCASE("regime mode without a context is an error")
    {
        CHECK_THROWS_AS((void)price_with_model(q, PricingModel::FouqueRegime,
                                               std::nullopt, global, spot, rate),
                        DataError);
    }
}
