#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "rsvol/black_scholes.hpp"
#include "rsvol/market_data.hpp"

namespace rsvol {

/// One point of the implied-volatility smile in LMMR coordinates,
/// L = log(K/x) / (T - s).
struct SmilePoint {
    double lmmr = 0.0;
    double implied_vol = 0.0; // > 0
    double weight = 1.0;
};

/// Affine fit I = a L + b of the smile.
struct SmileLine {
    double a = 0.0;            // slope, dimensionless
    double b = 0.0;            // intercept, per sqrt(year)
    double residual_rms = 0.0; // per sqrt(year)
};

/// Calibrated smile for one quote date: the affine fit plus the correction
/// coefficients extracted with a given effective volatility and rate.
/// v2/v3 are stored exactly as coefficients_from_fit computes them.
struct SmileFit {
    double a = 0.0;
    double b = 0.0;
    double sigma_bar = 0.0; // per sqrt(year), > 0
    double rate = 0.0;      // per year
    double v2 = 0.0;        // per year
    double v3 = 0.0;        // per year
    double residual_rms = 0.0;
    std::size_t n_points = 0;
};

struct SmilePointsResult {
    std::vector<SmilePoint> points;
    /// Quotes whose mid price could not be inverted to an implied vol,
    /// as (index into chain.quotes, reason). Skipped, not fatal, unless
    /// every quote fails.
    std::vector<std::pair<std::size_t, std::string>> skipped;
};

enum class SmileWeighting { None, Vega };

/// Converts a (filtered, nonempty) chain into smile points: one point per
/// invertible quote, L from (K, x, tau) and I from the mid price. With
/// vega weighting, weights are the BS vega at `sigma_bar_for_weights`.
/// Throws DataError if the chain is empty or no quote inverts.
SmilePointsResult compute_smile_points(const OptionChain& chain,
                                       SmileWeighting weighting = SmileWeighting::None,
                                       double sigma_bar_for_weights = 0.0);

/// (Weighted) ordinary least squares of I on L. Needs at least two points
/// with distinct L values; throws DataError on a degenerate design.
SmileLine fit_affine(const std::vector<SmilePoint>& points);

/// Correction coefficients from the fitted line:
///   v3 = -a * sigma_bar^3
///   v2 = sigma_bar * ((sigma_bar - b) - a * (rate + 1.5 sigma_bar^2))
struct SmileCoefficients {
    double v2 = 0.0;
    double v3 = 0.0;
};
SmileCoefficients coefficients_from_fit(double a, double b, double sigma_bar,
                                        double rate);

/// Inverse of coefficients_from_fit: the (a, b) that reproduce (v2, v3)
/// at the same sigma_bar and rate.
SmileLine line_from_coefficients(double v2, double v3, double sigma_bar,
                                 double rate);

/// Assembles a SmileFit from a fitted line. sigma_bar must be positive.
SmileFit make_smile_fit(const SmileLine& line, std::size_t n_points,
                        double sigma_bar, double rate);

/// End-to-end calibration of one chain: smile points, affine fit,
/// coefficients at the given sigma_bar. Refitting vs reusing a line only
/// differs under vega weighting (the unweighted OLS line does not depend
/// on sigma_bar).
SmileFit calibrate(const OptionChain& chain, double sigma_bar,
                   SmileWeighting weighting = SmileWeighting::None);

/// Same chain recalibrated at a regime's sigma_bar, either refitting the
/// line (weights re-evaluated) or reusing an existing line.
SmileFit recalibrate(const OptionChain& chain, double sigma_bar_i,
                     SmileWeighting weighting);
SmileFit recalibrate(const SmileLine& line, std::size_t n_points,
                     double sigma_bar_i, double rate);

std::string to_json(const SmileFit& fit);
SmileFit smile_fit_from_json(const std::string& json_text);

} // namespace rsvol
