#include "rsvol/black_scholes.hpp"

#include <algorithm>
#include <cmath>

#include "rsvol/errors.hpp"

namespace rsvol {
namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490393;
constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343818685;

void check_inputs(const BsInputs& in)
{
    if (!(in.spot > 0.0))
        throw DomainError("spot must be positive");
    if (!(in.strike > 0.0))
        throw DomainError("strike must be positive");
    if (!(in.vol >= 0.0))
        throw DomainError("vol must be nonnegative");
    if (!(in.tau >= 0.0))
        throw DomainError("tau must be nonnegative");
}

struct Band {
    double lower;
    double upper;
};

// No-arbitrage band: the sigma -> 0+ and sigma -> inf price limits.
Band price_band(const BsInputs& in, OptionType type)
{
    const double disc_k = in.strike * std::exp(-in.rate * in.tau);
    if (type == OptionType::Call)
        return {std::max(in.spot - disc_k, 0.0), in.spot};
    return {std::max(disc_k - in.spot, 0.0), disc_k};
}

} // namespace

double norm_pdf(double x)
{
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double norm_cdf(double x)
{
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

double bs_d1(const BsInputs& in)
{
    if (!(in.vol > 0.0) || !(in.tau > 0.0))
        throw DomainError("d1 requires vol > 0 and tau > 0");
    const double sig_sqrt_tau = in.vol * std::sqrt(in.tau);
    return (std::log(in.spot / in.strike) + (in.rate + 0.5 * in.vol * in.vol) * in.tau)
           / sig_sqrt_tau;
}

double bs_price(const BsInputs& in, OptionType type)
{
    check_inputs(in);
    if (in.tau == 0.0) {
        // Expiry payoff; the limit exists even where the greeks do not.
        return type == OptionType::Call ? std::max(in.spot - in.strike, 0.0)
                                        : std::max(in.strike - in.spot, 0.0);
    }
    if (in.vol == 0.0) {
        const double disc_k = in.strike * std::exp(-in.rate * in.tau);
        return type == OptionType::Call ? std::max(in.spot - disc_k, 0.0)
                                        : std::max(disc_k - in.spot, 0.0);
    }
    const double d1 = bs_d1(in);
    const double d2 = d1 - in.vol * std::sqrt(in.tau);
    const double disc_k = in.strike * std::exp(-in.rate * in.tau);
    if (type == OptionType::Call)
        return in.spot * norm_cdf(d1) - disc_k * norm_cdf(d2);
    return disc_k * norm_cdf(-d2) - in.spot * norm_cdf(-d1);
}

GreekSet greeks(const BsInputs& in)
{
    check_inputs(in);
    if (!(in.vol > 0.0) || !(in.tau > 0.0))
        throw DomainError("greeks require vol > 0 and tau > 0");
    const double sqrt_tau = std::sqrt(in.tau);
    const double d1 = bs_d1(in);
    const double pdf = norm_pdf(d1);

    GreekSet g;
    g.gamma = pdf / (in.spot * in.vol * sqrt_tau);
    g.speed = -(g.gamma / in.spot) * (1.0 + d1 / (in.vol * sqrt_tau));
    g.vega = in.spot * pdf * sqrt_tau;
    return g;
}

double implied_vol(double price, const BsInputs& in, OptionType type)
{
    BsInputs work = in;
    work.vol = 1.0; // placeholder so check_inputs passes
    check_inputs(work);
    if (!(work.tau > 0.0))
        throw DomainError("implied_vol requires tau > 0");

    const Band band = price_band(work, type);
    if (!(price > band.lower))
        throw DataError("price " + std::to_string(price)
                        + " at or below the intrinsic bound "
                        + std::to_string(band.lower));
    if (!(price < band.upper))
        throw DataError("price " + std::to_string(price)
                        + " at or above the upper arbitrage bound "
                        + std::to_string(band.upper));

    double lo = 1e-6, hi = 5.0;
    const auto f = [&](double sigma) {
        work.vol = sigma;
        return bs_price(work, type) - price;
    };
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (f_lo > 0.0 || f_hi < 0.0)
        throw DataError("no implied-vol root in [1e-6, 5.0] for price "
                        + std::to_string(price));

    const double price_tol = 1e-12 * work.spot; // well inside the 1e-10*spot contract
    double sigma = 0.5 * (lo + hi);
    double f_mid = f(sigma);
    for (int it = 0; it < 200; ++it) {
        if (std::abs(f_mid) <= price_tol && hi - lo <= 1e-12 * std::max(1.0, sigma))
            break;
        // Maintain the bracket first.
        if (f_mid > 0.0) {
            hi = sigma;
            f_hi = f_mid;
        } else {
            lo = sigma;
            f_lo = f_mid;
        }
        // Newton step from the current iterate, safeguarded by the bracket.
        work.vol = sigma;
        double next = 0.0;
        bool newton_ok = false;
        const double vega = greeks(work).vega;
        if (vega > 1e-14) {
            next = sigma - f_mid / vega;
            newton_ok = next > lo && next < hi;
        }
        if (!newton_ok)
            next = 0.5 * (lo + hi);
        sigma = next;
        f_mid = f(sigma);
    }
    return sigma;
}

namespace {

// Adaptive Simpson with explicit error control on each subinterval.
double adaptive_simpson(const std::function<double(double)>& fn, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = fn(lm);
    const double frm = fn(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
           + adaptive_simpson(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& fn, double a, double b,
                 double rel_tol)
{
    const double fa = fn(a);
    const double m = 0.5 * (a + b);
    const double fm = fn(m);
    const double fb = fn(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // Scale the absolute tolerance off a crude magnitude estimate; a second
    // pass tightens it once the value is known.
    double scale = std::max({std::abs(whole), (b - a) * std::abs(fm), 1e-300});
    double result = adaptive_simpson(fn, a, b, fa, fm, fb, whole, rel_tol * scale, 48);
    if (std::abs(result) < 0.1 * scale && std::abs(result) > 0.0) {
        scale = std::abs(result);
        result = adaptive_simpson(fn, a, b, fa, fm, fb, whole, rel_tol * scale, 48);
    }
    return result;
}

} // namespace

double constant_vol_equivalent(const std::function<double(double)>& sigma_sq_fn,
                               double t, double T)
{
    if (!(T > t))
        throw DomainError("constant_vol_equivalent requires T > t");
    const double integral = integrate(sigma_sq_fn, t, T, 1e-10);
    if (integral < 0.0)
        throw DomainError("variance integral came out negative");
    return std::sqrt(integral / (T - t));
}

} // namespace rsvol
