#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rsvol/market_data.hpp"
#include "rsvol/perturbation.hpp"
#include "rsvol/smile.hpp"

namespace rsvol {

/// One priced quote: the observed mid against up to three model prices.
struct ReportRow {
    double expiry = 0.0;
    double strike = 0.0;
    double observed = 0.0;
    std::optional<double> bs;
    std::optional<double> standard;
    std::optional<double> regime;
};

/// Comparison table for one quote date, mirroring the layout of the
/// empirical result tables plus the average-percentage-error summary.
struct PricingReport {
    Date quote_date;
    std::vector<ReportRow> rows;
    std::optional<double> err_bs;       // percentages, >= 0
    std::optional<double> err_standard;
    std::optional<double> err_regime;
    std::optional<int> regime_used;
    double sigma_bar = 0.0;   // global
    std::optional<double> sigma_bar_i;
    std::vector<std::string> notes;
};

/// (1/N) sum |observed_i - model_i| / observed_i, as a percentage.
/// Lengths must match and observed entries must be positive.
double average_pct_error(std::span<const double> observed,
                         std::span<const double> model);

/// Prices every quote of the (already filtered) chain under the requested
/// models and assembles the error summary. FouqueRegime requires ctx.
/// An empty chain raises DataError("no quotes after filtering").
PricingReport build_report(const OptionChain& chain, const SmileFit& global_fit,
                           const std::optional<RegimePricingContext>& regime_ctx,
                           const std::set<PricingModel>& modes);

/// Plot-ready slice of the report at one expiry, sorted by strike:
/// CSV `strike,empirical,black_scholes,fouque_standard,fouque_regime`.
/// DataError when the report has no rows at that expiry.
void emit_plot_data(const PricingReport& report, double expiry,
                    const std::string& out_path);

/// Fixed-precision renderings: prices at 0.1 cent, errors at 0.1
/// percentage point. The JSON and the table show identical numbers.
std::string render_text_table(const PricingReport& report);
std::string to_json(const PricingReport& report);

/// A table of already-printed prices for the replay path:
/// CSV `expiry,strike,empirical,bs,standard,regime`.
struct PrintedTable {
    std::vector<double> expiry;
    std::vector<double> strike;
    std::vector<double> empirical;
    std::vector<double> bs;
    std::vector<double> standard;
    std::vector<double> regime;
};

PrintedTable load_printed_table(const std::string& path);

struct ReplayErrors {
    double bs = 0.0;       // percentages
    double standard = 0.0;
    double regime = 0.0;
};

/// Recomputes the three average-percentage-error figures from a printed
/// table's price columns.
ReplayErrors replay_table_errors(const PrintedTable& table);

} // namespace rsvol
