#include "rsvol/smile.hpp"

#include <cmath>

#include <json.hpp>

#include "rsvol/errors.hpp"

namespace rsvol {

SmilePointsResult compute_smile_points(const OptionChain& chain,
                                       SmileWeighting weighting,
                                       double sigma_bar_for_weights)
{
    if (chain.quotes.empty())
        throw DataError("cannot compute smile points for an empty chain");
    if (weighting == SmileWeighting::Vega && !(sigma_bar_for_weights > 0.0))
        throw DataError("vega weighting needs a positive sigma_bar");

    SmilePointsResult res;
    for (std::size_t i = 0; i < chain.quotes.size(); ++i) {
        const OptionQuote& q = chain.quotes[i];
        BsInputs in;
        in.spot = chain.spot;
        in.strike = q.strike;
        in.rate = chain.rate;
        in.tau = q.expiry;
        try {
            SmilePoint p;
            p.implied_vol = implied_vol(mid_price(q), in, q.type);
            p.lmmr = std::log(q.strike / chain.spot) / q.expiry;
            if (weighting == SmileWeighting::Vega) {
                in.vol = sigma_bar_for_weights;
                p.weight = greeks(in).vega;
            }
            res.points.push_back(p);
        } catch (const std::exception& e) {
            res.skipped.emplace_back(i, e.what());
        }
    }
    if (res.points.empty())
        throw DataError("no quote could be inverted to an implied volatility ("
                        + std::to_string(res.skipped.size()) + " skipped)");
    return res;
}

SmileLine fit_affine(const std::vector<SmilePoint>& points)
{
    if (points.size() < 2)
        throw DataError("affine fit needs at least 2 smile points");

    double wsum = 0.0, lmean = 0.0, imean = 0.0;
    double l_min = points.front().lmmr, l_max = points.front().lmmr;
    for (const auto& p : points) {
        if (!(p.weight > 0.0))
            throw DataError("smile point weights must be positive");
        wsum += p.weight;
        lmean += p.weight * p.lmmr;
        imean += p.weight * p.implied_vol;
        l_min = std::min(l_min, p.lmmr);
        l_max = std::max(l_max, p.lmmr);
    }
    if (!(l_max > l_min))
        throw DataError("degenerate design: all smile points share one LMMR value");
    lmean /= wsum;
    imean /= wsum;

    double sll = 0.0, sli = 0.0;
    for (const auto& p : points) {
        const double dl = p.lmmr - lmean;
        sll += p.weight * dl * dl;
        sli += p.weight * dl * (p.implied_vol - imean);
    }

    SmileLine line;
    line.a = sli / sll;
    line.b = imean - line.a * lmean;

    double ss = 0.0;
    for (const auto& p : points) {
        const double r = p.implied_vol - (line.a * p.lmmr + line.b);
        ss += p.weight * r * r;
    }
    line.residual_rms = std::sqrt(ss / wsum);
    return line;
}

SmileCoefficients coefficients_from_fit(double a, double b, double sigma_bar,
                                        double rate)
{
    if (!(sigma_bar > 0.0))
        throw DomainError("sigma_bar must be positive");
    SmileCoefficients c;
    c.v3 = -a * sigma_bar * sigma_bar * sigma_bar;
    c.v2 = sigma_bar * ((sigma_bar - b) - a * (rate + 1.5 * sigma_bar * sigma_bar));
    return c;
}

SmileLine line_from_coefficients(double v2, double v3, double sigma_bar, double rate)
{
    if (!(sigma_bar > 0.0))
        throw DomainError("sigma_bar must be positive");
    SmileLine line;
    line.a = -v3 / (sigma_bar * sigma_bar * sigma_bar);
    line.b = sigma_bar - line.a * (rate + 1.5 * sigma_bar * sigma_bar) - v2 / sigma_bar;
    return line;
}

SmileFit make_smile_fit(const SmileLine& line, std::size_t n_points,
                        double sigma_bar, double rate)
{
    const SmileCoefficients c = coefficients_from_fit(line.a, line.b, sigma_bar, rate);
    SmileFit fit;
    fit.a = line.a;
    fit.b = line.b;
    fit.sigma_bar = sigma_bar;
    fit.rate = rate;
    fit.v2 = c.v2;
    fit.v3 = c.v3;
    fit.residual_rms = line.residual_rms;
    fit.n_points = n_points;
    return fit;
}

SmileFit calibrate(const OptionChain& chain, double sigma_bar,
                   SmileWeighting weighting)
{
    const auto pts = compute_smile_points(chain, weighting, sigma_bar);
    const SmileLine line = fit_affine(pts.points);
    return make_smile_fit(line, pts.points.size(), sigma_bar, chain.rate);
}

SmileFit recalibrate(const OptionChain& chain, double sigma_bar_i,
                     SmileWeighting weighting)
{
    return calibrate(chain, sigma_bar_i, weighting);
}

SmileFit recalibrate(const SmileLine& line, std::size_t n_points,
                     double sigma_bar_i, double rate)
{
    return make_smile_fit(line, n_points, sigma_bar_i, rate);
}

std::string to_json(const SmileFit& fit)
{
    nlohmann::json j;
    j["a"] = fit.a;
    j["b"] = fit.b;
    j["sigma_bar"] = fit.sigma_bar;
    j["rate"] = fit.rate;
    j["v2"] = fit.v2;
    j["v3"] = fit.v3;
    j["residual_rms"] = fit.residual_rms;
    j["n_points"] = fit.n_points;
    return j.dump(2);
}

SmileFit smile_fit_from_json(const std::string& json_text)
{
    SmileFit fit;
    try {
        const auto j = nlohmann::json::parse(json_text);
        fit.a = j.at("a").get<double>();
        fit.b = j.at("b").get<double>();
        fit.sigma_bar = j.at("sigma_bar").get<double>();
        fit.rate = j.at("rate").get<double>();
        fit.v2 = j.at("v2").get<double>();
        fit.v3 = j.at("v3").get<double>();
        fit.residual_rms = j.value("residual_rms", 0.0);
        fit.n_points = j.value("n_points", std::size_t{0});
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad smile fit JSON: ") + e.what());
    }
    if (!(fit.sigma_bar > 0.0))
        throw DataError("smile fit JSON has nonpositive sigma_bar");
    return fit;
}

} // namespace rsvol
