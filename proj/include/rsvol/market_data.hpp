#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rsvol/date.hpp"

namespace rsvol {

enum class OptionType { Call, Put };

const char* to_string(OptionType t);
OptionType option_type_from_string(std::string_view s); // throws DataError

/// One observed quote: bid/ask in currency units, expiry as an ACT/365
/// year fraction (stored exactly as quoted, no date arithmetic).
struct OptionQuote {
    Date quote_date;
    double expiry = 0.0; // year fraction, > 0
    double strike = 0.0; // > 0
    double bid = 0.0;    // >= 0
    double ask = 0.0;    // >= bid
    OptionType type = OptionType::Call;
};

/// All quotes observed on one date, plus the spot and short rate for that
/// date. Spot and rate are caller inputs; they cannot be inferred from the
/// quotes alone.
struct OptionChain {
    Date quote_date;
    double spot = 0.0; // X, > 0
    double rate = 0.0; // r, per year
    std::vector<OptionQuote> quotes;
};

/// Mid-point of bid and ask.
inline double mid_price(const OptionQuote& q) { return 0.5 * (q.bid + q.ask); }

/// Validates a single quote's invariants; throws DataError naming `context`
/// (e.g. "line 7") on violation.
void validate_quote(const OptionQuote& q, const std::string& context);

/// Reads a chain from CSV with header
///   quote_date,expiry_years,strike,bid,ask,type
/// (ISO dates, '.' decimal point, type in {call,put}). Quote order is
/// preserved. Malformed rows, bid > ask, nonpositive strike/expiry and
/// mixed quote dates raise DataError naming the offending line.
OptionChain load_chain(const std::string& path, double spot, double rate);

/// Writes the chain back in the load_chain schema (round-trips exactly for
/// values printed at full precision).
void save_chain(const OptionChain& chain, const std::string& path);

struct FilterResult {
    OptionChain chain;
    std::size_t dropped_moneyness = 0; // |K/X - 1| > band
    std::size_t dropped_expiry = 0;    // expiry < min_expiry
};

inline constexpr double kDefaultMoneynessBand = 0.03;
inline constexpr double kDefaultMinExpiry = 21.0 / 365.0;

/// Liquidity filter: keeps quotes with |strike/spot - 1| <= moneyness_band
/// and expiry >= min_expiry, preserving order. A quote violating both rules
/// is counted under both. Empty output is legal.
FilterResult filter_chain(const OptionChain& chain,
                          double moneyness_band = kDefaultMoneynessBand,
                          double min_expiry = kDefaultMinExpiry);

} // namespace rsvol
