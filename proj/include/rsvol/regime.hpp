#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rsvol/date.hpp"

namespace rsvol {

/// Validated discrete-time Markov chain over regimes: R x R transition
/// matrix A (rows sum to 1 within 1e-12) and initial distribution pi.
class MarkovChain {
public:
    MarkovChain(std::vector<std::vector<double>> transition,
                std::vector<double> initial);

    int n_regimes() const { return static_cast<int>(initial_.size()); }
    const std::vector<std::vector<double>>& transition() const { return transition_; }
    const std::vector<double>& initial() const { return initial_; }

private:
    std::vector<std::vector<double>> transition_;
    std::vector<double> initial_;
};

inline MarkovChain construct_markov_chain(std::vector<std::vector<double>> transition,
                                          std::vector<double> initial)
{
    return MarkovChain(std::move(transition), std::move(initial));
}

/// Mean-reversion dynamics of the volatility driver Y:
///   dY = alpha (m - Y) dt + beta dW2.
struct OuParams {
    double alpha = 1.0; // per year, > 0
    double m = 0.0;     // long-run mean of Y
    double beta = 0.0;  // per sqrt(year), >= 0

    double epsilon() const { return 1.0 / alpha; }
    /// Long-run variance of Y, nu^2 = beta^2 / (2 alpha).
    double nu_sq() const { return beta * beta / (2.0 * alpha); }

    void validate() const; // throws DomainError
};

/// Per-regime parameter set. Only sigma_bar is needed for pricing; mu and
/// the OU parameters drive simulation; the Hardy mean/variance describe
/// the regime's per-period return distribution (variance convention).
struct RegimeParams {
    int regime_index = 0; // 1-based
    double mu = 0.0;      // per year
    double sigma_bar = 0.0; // per sqrt(year), > 0
    std::optional<OuParams> ou;
    double hardy_mean = 0.0; // u_i, per period
    double hardy_var = 0.0;  // phi_i, per period^2, >= 0

    void validate() const;
};

/// Regime labels are external inputs (no estimation): a date -> regime map
/// plus the switch cadence. Switch boundaries fall every switch_interval
/// years (ACT/365) counted from January 1 of a date's year, so the default
/// 1.0 interval means regimes can change only at calendar year starts.
struct RegimeCalendar {
    double switch_interval = 1.0; // years
    std::map<Date, int> labels;

    /// Labeled regime for the date; DataError if unlabeled (no inference).
    int regime_for_date(Date date) const;

    /// First switch boundary strictly after `date`.
    Date next_switch_after(Date date) const;
};

inline int regime_for_date(const RegimeCalendar& cal, Date date)
{
    return cal.regime_for_date(date);
}

/// Draws a regime path: first state from pi, each subsequent from the
/// current row of A. Deterministic for a fixed seed, regardless of thread
/// count or platform (own counter-based generator). 1-based indices.
std::vector<int> simulate_regime_sequence(const MarkovChain& chain,
                                          std::size_t n_steps,
                                          std::uint64_t seed);

/// Log-return distribution of a regime over `horizon` years with the
/// effective volatility standing in for the constant-vol equivalent:
/// mean = (mu - sigma_bar^2/2) h, variance = sigma_bar^2 h.
struct ReturnMoments {
    double mean = 0.0;
    double variance = 0.0;
};
ReturnMoments regime_return_distribution(const RegimeParams& params, double horizon);

/// CSV `quote_date,regime` (ISO dates, 1-based regimes).
std::map<Date, int> load_regime_labels(const std::string& path);

/// JSON list of RegimeParams objects.
std::vector<RegimeParams> load_regime_params(const std::string& path);
std::string regime_params_to_json(const std::vector<RegimeParams>& params);

} // namespace rsvol
