#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rsvol/kernels/path_step.hpp"
#include "rsvol/regime.hpp"

namespace rsvol {

enum class DriftMode {
    RiskNeutral, // asset drift = rate; required by mc_option_price
    Physical     // asset drift = mu_i of the active regime
};

/// Monte Carlo controls. Fixed (seed, n_paths, n_steps) give bit-identical
/// output for any thread count and either SIMD lane.
struct SimConfig {
    std::size_t n_paths = 10000;
    std::size_t n_steps = 0; // 0 = default_n_steps(horizon)
    double horizon = 1.0;    // years
    double rho = 0.0;        // corr(dW1, dW2), |rho| <= 1
    std::uint64_t seed = 1;
    double gamma_mpvr = 0.0; // market price of volatility risk (constant)
    DriftMode drift = DriftMode::RiskNeutral;
    std::optional<double> y0; // start of the vol driver; default: first regime's m
    bool store_paths = false; // keep full asset/sigma/Y grids
    unsigned n_threads = 0;   // 0 = hardware concurrency
    kernels::Lane lane = kernels::Lane::Auto;

    void validate() const;
};

/// Default step count keeping dt <= 1/2520 (Y is exact at any dt; this
/// bounds the asset's log-Euler error only).
std::size_t default_n_steps(double horizon);

/// Simulation output. Terminal values are always present; the full
/// n_paths x (n_steps+1) grids only when SimConfig::store_paths is set
/// (they get large fast). Grids are row-major: path i, step k at
/// [i * (n_steps+1) + k].
struct PathBundle {
    std::size_t n_paths = 0;
    std::size_t n_steps = 0;
    double dt = 0.0;
    DriftMode drift = DriftMode::RiskNeutral;

    std::vector<double> terminal_assets; // X(T), one per path
    std::vector<double> assets;          // optional full grid, X > 0
    std::vector<double> sigmas;          // optional full grid, sigma = e^Y > 0
    std::vector<double> ys;              // optional full grid

    bool has_grids() const { return !assets.empty(); }
    std::span<const double> asset_row(std::size_t path) const;
    std::span<const double> sigma_row(std::size_t path) const;
    std::span<const double> y_row(std::size_t path) const;
};

/// Exact (discretization-free) samples of Y(t) given Y(0) = y0:
///   Y(t) ~ N(m + (y0 - m) e^{-alpha t}, nu^2 (1 - e^{-2 alpha t})).
std::vector<double> ou_exact_sample(const OuParams& params, double y0, double t,
                                    std::size_t draws, std::uint64_t seed);

/// Simulates regime-switching exponential-OU paths. regime_seq holds the
/// active regime (1-based, indexing `regimes` by regime_index) for each
/// consecutive switch interval; it must cover the horizon. Y starts at the
/// active regime's m and advances by exact OU transitions; sigma = e^Y is
/// frozen at the step's left endpoint; X advances by log-Euler with drift
/// = rate (risk-neutral) or mu_i (physical). Wiener increments are
/// correlated as dW2 = rho dW1 + sqrt(1-rho^2) dW*.
PathBundle simulate_rsexpou_paths(const std::vector<RegimeParams>& regimes,
                                  const std::vector<int>& regime_seq,
                                  const RegimeCalendar& calendar,
                                  const SimConfig& cfg, double spot0, double rate);

/// sqrt of the time average of sigma^2 along one path (trapezoidal rule).
double ergodic_sigma_bar(std::span<const double> vol_path, double dt);

/// Annualized sample standard deviation of log returns observed at
/// spacing dt: sd(returns) / sqrt(dt). Needs at least two returns.
double sigma_bar_from_returns(std::span<const double> log_returns, double dt);

struct McPrice {
    double price = 0.0;
    double std_error = 0.0;
};

/// Discounted mean call payoff across paths with its standard error.
/// The bundle must come from a risk-neutral run (DataError otherwise).
McPrice mc_option_price(const PathBundle& bundle, double strike, double rate,
                        double horizon);

/// Debug dump: CSV `path_id,step,time,asset,sigma,y` (needs full grids).
void dump_paths_csv(const PathBundle& bundle, const std::string& path);

} // namespace rsvol
