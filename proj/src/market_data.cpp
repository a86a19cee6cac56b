#include "rsvol/market_data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rsvol/errors.hpp"

namespace rsvol {
namespace {

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ','))
        out.push_back(field);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

double parse_number(const std::string& field, const std::string& context)
{
    const char* first = field.data();
    const char* last = field.data() + field.size();
    while (first != last && std::isspace(static_cast<unsigned char>(*first)))
        ++first;
    while (last != first && std::isspace(static_cast<unsigned char>(last[-1])))
        --last;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw DataError(context + ": bad number '" + field + "'");
    return value;
}

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

const char* to_string(OptionType t)
{
    return t == OptionType::Call ? "call" : "put";
}

OptionType option_type_from_string(std::string_view s)
{
    const std::string l = lower(trim(std::string(s)));
    if (l == "call")
        return OptionType::Call;
    if (l == "put")
        return OptionType::Put;
    throw DataError("unknown option type '" + std::string(s) + "'");
}

void validate_quote(const OptionQuote& q, const std::string& context)
{
    if (!(q.strike > 0.0))
        throw DataError(context + ": strike must be positive, got "
                        + std::to_string(q.strike));
    if (!(q.expiry > 0.0))
        throw DataError(context + ": expiry must be positive, got "
                        + std::to_string(q.expiry));
    if (!(q.bid >= 0.0))
        throw DataError(context + ": bid must be nonnegative, got "
                        + std::to_string(q.bid));
    if (!(q.ask >= q.bid))
        throw DataError(context + ": ask " + std::to_string(q.ask)
                        + " below bid " + std::to_string(q.bid));
}

OptionChain load_chain(const std::string& path, double spot, double rate)
{
    if (!(spot > 0.0))
        throw DataError("spot must be positive");
    if (!std::isfinite(rate))
        throw DataError("rate must be finite");

    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open chain file '" + path + "'");

    std::string line;
    if (!std::getline(in, line))
        throw DataError(path + ": empty file");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    static const std::string kHeader = "quote_date,expiry_years,strike,bid,ask,type";
    if (lower(trim(line)) != kHeader)
        throw DataError(path + " line 1: expected header '" + kHeader + "'");

    OptionChain chain;
    chain.spot = spot;
    chain.rate = rate;

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (trim(line).empty())
            continue;
        const std::string ctx = path + " line " + std::to_string(line_no);
        const auto fields = split_csv_line(line);
        if (fields.size() != 6)
            throw DataError(ctx + ": expected 6 fields, got "
                            + std::to_string(fields.size()));

        OptionQuote q;
        q.quote_date = Date::parse(trim(fields[0]));
        q.expiry = parse_number(fields[1], ctx);
        q.strike = parse_number(fields[2], ctx);
        q.bid = parse_number(fields[3], ctx);
        q.ask = parse_number(fields[4], ctx);
        q.type = option_type_from_string(fields[5]);
        validate_quote(q, ctx);

        if (chain.quotes.empty())
            chain.quote_date = q.quote_date;
        else if (q.quote_date != chain.quote_date)
            throw DataError(ctx + ": quote date " + q.quote_date.to_string()
                            + " differs from chain date "
                            + chain.quote_date.to_string());
        chain.quotes.push_back(q);
    }
    return chain;
}

void save_chain(const OptionChain& chain, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write chain file '" + path + "'");
    out << "quote_date,expiry_years,strike,bid,ask,type\n";
    out.precision(17);
    for (const auto& q : chain.quotes)
        out << q.quote_date.to_string() << ',' << q.expiry << ',' << q.strike << ','
            << q.bid << ',' << q.ask << ',' << to_string(q.type) << '\n';
    if (!out)
        throw DataError("write failed for '" + path + "'");
}

FilterResult filter_chain(const OptionChain& chain, double moneyness_band,
                          double min_expiry)
{
    FilterResult result;
    result.chain.quote_date = chain.quote_date;
    result.chain.spot = chain.spot;
    result.chain.rate = chain.rate;
    for (const auto& q : chain.quotes) {
        const bool near_money = std::abs(q.strike / chain.spot - 1.0) <= moneyness_band;
        const bool long_enough = q.expiry >= min_expiry;
        if (!near_money)
            ++result.dropped_moneyness;
        if (!long_enough)
            ++result.dropped_expiry;
        if (near_money && long_enough)
            result.chain.quotes.push_back(q);
    }
    return result;
}

} // namespace rsvol
