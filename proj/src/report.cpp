#include "rsvol/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rsvol/errors.hpp"

namespace rsvol {
namespace {

std::string fmt1(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

std::string fmt_full(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_field(const std::string& s, const std::string& ctx)
{
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError(ctx + ": bad number '" + s + "'");
    }
}

} // namespace

double average_pct_error(std::span<const double> observed,
                         std::span<const double> model)
{
    if (observed.size() != model.size())
        throw DataError("observed and model price lists differ in length ("
                        + std::to_string(observed.size()) + " vs "
                        + std::to_string(model.size()) + ")");
    if (observed.empty())
        throw DataError("average_pct_error needs at least one price");
    double acc = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!(observed[i] > 0.0))
            throw DataError("observed price at index " + std::to_string(i)
                            + " is not positive");
        acc += std::abs(observed[i] - model[i]) / observed[i];
    }
    return 100.0 * acc / static_cast<double>(observed.size());
}

PricingReport build_report(const OptionChain& chain, const SmileFit& global_fit,
                           const std::optional<RegimePricingContext>& regime_ctx,
                           const std::set<PricingModel>& modes)
{
    if (chain.quotes.empty())
        throw DataError("no quotes after filtering");
    if (modes.empty())
        throw DataError("no pricing model requested");
    if (modes.count(PricingModel::FouqueRegime) && !regime_ctx)
        throw DataError("regime pricing requested but no regime context supplied");

    PricingReport report;
    report.quote_date = chain.quote_date;
    report.sigma_bar = global_fit.sigma_bar;
    if (regime_ctx) {
        report.regime_used = regime_ctx->regime_index;
        report.sigma_bar_i = regime_ctx->sigma_bar_i;
    }

    std::vector<double> observed, col_bs, col_std, col_reg;
    for (const auto& q : chain.quotes) {
        ReportRow row;
        row.expiry = q.expiry;
        row.strike = q.strike;
        row.observed = mid_price(q);
        observed.push_back(row.observed);

        for (PricingModel m : modes) {
            const PerturbationPrice p =
                price_with_model(q, m, regime_ctx, global_fit, chain.spot, chain.rate);
            if (p.negative_total)
                report.notes.push_back("negative corrected price ("
                                       + std::string(to_string(m)) + ", strike "
                                       + fmt1(q.strike) + ", expiry "
                                       + fmt_full(q.expiry) + ")");
            switch (m) {
            case PricingModel::BlackScholes:
                row.bs = p.total;
                col_bs.push_back(p.total);
                break;
            case PricingModel::FouqueStandard:
                row.standard = p.total;
                col_std.push_back(p.total);
                break;
            case PricingModel::FouqueRegime:
                row.regime = p.total;
                col_reg.push_back(p.total);
                break;
            }
        }
        report.rows.push_back(row);
    }

    if (!col_bs.empty())
        report.err_bs = average_pct_error(observed, col_bs);
    if (!col_std.empty())
        report.err_standard = average_pct_error(observed, col_std);
    if (!col_reg.empty())
        report.err_regime = average_pct_error(observed, col_reg);
    return report;
}

void emit_plot_data(const PricingReport& report, double expiry,
                    const std::string& out_path)
{
    std::vector<const ReportRow*> rows;
    for (const auto& r : report.rows)
        if (std::abs(r.expiry - expiry) <= 1e-12)
            rows.push_back(&r);
    if (rows.empty())
        throw DataError("report has no rows at expiry " + fmt_full(expiry));
    std::stable_sort(rows.begin(), rows.end(),
                     [](const ReportRow* a, const ReportRow* b) {
                         return a->strike < b->strike;
                     });

    std::ofstream out(out_path);
    if (!out)
        throw DataError("cannot write plot file '" + out_path + "'");
    out << "strike,empirical,black_scholes,fouque_standard,fouque_regime\n";
    for (const ReportRow* r : rows) {
        out << fmt_full(r->strike) << ',' << fmt_full(r->observed) << ',';
        if (r->bs)
            out << fmt_full(*r->bs);
        out << ',';
        if (r->standard)
            out << fmt_full(*r->standard);
        out << ',';
        if (r->regime)
            out << fmt_full(*r->regime);
        out << '\n';
    }
    if (!out)
        throw DataError("write failed for '" + out_path + "'");
}

std::string render_text_table(const PricingReport& report)
{
    std::ostringstream os;
    os << "Quote date: " << report.quote_date.to_string() << "\n";
    os << "sigma_bar: " << fmt_full(report.sigma_bar);
    if (report.sigma_bar_i)
        os << "  sigma_bar_i: " << fmt_full(*report.sigma_bar_i) << " (regime "
           << *report.regime_used << ")";
    os << "\n";
    os << "expiry  strike   empirical  black_scholes  fouque_standard  fouque_regime\n";
    for (const auto& r : report.rows) {
        char line[160];
        std::snprintf(line, sizeof line, "%-7.2f %-8.1f %-10.1f", r.expiry, r.strike,
                      r.observed);
        os << line;
        const auto cell = [&os](const std::optional<double>& v, int width) {
            char buf[32];
            if (v)
                std::snprintf(buf, sizeof buf, "%-*.1f", width, *v);
            else
                std::snprintf(buf, sizeof buf, "%-*s", width, "-");
            os << buf;
        };
        cell(r.bs, 15);
        cell(r.standard, 17);
        cell(r.regime, 14);
        os << "\n";
    }
    os << "avg pct error:              ";
    const auto err_cell = [&os](const std::optional<double>& v, int width) {
        char buf[32];
        if (v)
            std::snprintf(buf, sizeof buf, "%-*s", width, (fmt1(*v) + "%").c_str());
        else
            std::snprintf(buf, sizeof buf, "%-*s", width, "-");
        os << buf;
    };
    err_cell(report.err_bs, 15);
    err_cell(report.err_standard, 17);
    err_cell(report.err_regime, 14);
    os << "\n";
    for (const auto& n : report.notes)
        os << "note: " << n << "\n";
    return os.str();
}

std::string to_json(const PricingReport& report)
{
    nlohmann::json j;
    j["quote_date"] = report.quote_date.to_string();
    j["sigma_bar"] = report.sigma_bar;
    if (report.sigma_bar_i)
        j["sigma_bar_i"] = *report.sigma_bar_i;
    if (report.regime_used)
        j["regime_used"] = *report.regime_used;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : report.rows) {
        nlohmann::json row;
        row["expiry"] = r.expiry;
        row["strike"] = r.strike;
        row["observed"] = r.observed;
        if (r.bs)
            row["black_scholes"] = *r.bs;
        if (r.standard)
            row["fouque_standard"] = *r.standard;
        if (r.regime)
            row["fouque_regime"] = *r.regime;
        j["rows"].push_back(std::move(row));
    }
    nlohmann::json errs;
    if (report.err_bs)
        errs["black_scholes"] = *report.err_bs;
    if (report.err_standard)
        errs["fouque_standard"] = *report.err_standard;
    if (report.err_regime)
        errs["fouque_regime"] = *report.err_regime;
    j["avg_pct_error"] = std::move(errs);
    if (!report.notes.empty())
        j["notes"] = report.notes;
    return j.dump(2);
}

PrintedTable load_printed_table(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open table file '" + path + "'");

    std::string line;
    if (!std::getline(in, line))
        throw DataError(path + ": empty file");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    static const std::string kHeader = "expiry,strike,empirical,bs,standard,regime";
    if (line != kHeader)
        throw DataError(path + " line 1: expected header '" + kHeader + "'");

    PrintedTable t;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const std::string ctx = path + " line " + std::to_string(line_no);
        std::stringstream ss(line);
        std::string field;
        std::vector<double> vals;
        while (std::getline(ss, field, ','))
            vals.push_back(parse_field(field, ctx));
        if (vals.size() != 6)
            throw DataError(ctx + ": expected 6 fields, got "
                            + std::to_string(vals.size()));
        if (!(vals[2] > 0.0))
            throw DataError(ctx + ": empirical price must be positive");
        t.expiry.push_back(vals[0]);
        t.strike.push_back(vals[1]);
        t.empirical.push_back(vals[2]);
        t.bs.push_back(vals[3]);
        t.standard.push_back(vals[4]);
        t.regime.push_back(vals[5]);
    }
    if (t.empirical.empty())
        throw DataError(path + ": no data rows");
    return t;
}

ReplayErrors replay_table_errors(const PrintedTable& table)
{
    ReplayErrors e;
    e.bs = average_pct_error(table.empirical, table.bs);
    e.standard = average_pct_error(table.empirical, table.standard);
    e.regime = average_pct_error(table.empirical, table.regime);
    return e;
}

} // namespace rsvol
