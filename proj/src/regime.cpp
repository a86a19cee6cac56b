#include "rsvol/regime.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rsvol/errors.hpp"
#include "rsvol/kernels/rng.hpp"

namespace rsvol {

MarkovChain::MarkovChain(std::vector<std::vector<double>> transition,
                         std::vector<double> initial)
    : transition_(std::move(transition)), initial_(std::move(initial))
{
    const std::size_t r = initial_.size();
    if (r == 0)
        throw DataError("Markov chain needs at least one regime");
    if (transition_.size() != r)
        throw DataError("transition matrix has " + std::to_string(transition_.size())
                        + " rows for " + std::to_string(r) + " regimes");

    constexpr double tol = 1e-12;
    for (std::size_t i = 0; i < r; ++i) {
        if (transition_[i].size() != r)
            throw DataError("transition row " + std::to_string(i + 1)
                            + " is not length " + std::to_string(r));
        double sum = 0.0;
        for (double p : transition_[i]) {
            if (p < 0.0 || p > 1.0)
                throw DataError("transition row " + std::to_string(i + 1)
                                + " has probability outside [0,1]");
            sum += p;
        }
        if (std::abs(sum - 1.0) > tol)
            throw DataError("transition row " + std::to_string(i + 1) + " sums to "
                            + std::to_string(sum) + ", not 1");
    }
    double psum = 0.0;
    for (double p : initial_) {
        if (p < 0.0 || p > 1.0)
            throw DataError("initial distribution has probability outside [0,1]");
        psum += p;
    }
    if (std::abs(psum - 1.0) > tol)
        throw DataError("initial distribution sums to " + std::to_string(psum)
                        + ", not 1");
}

void OuParams::validate() const
{
    if (!(alpha > 0.0))
        throw DomainError("OU alpha must be positive");
    if (!(beta >= 0.0))
        throw DomainError("OU beta must be nonnegative");
    if (!std::isfinite(m))
        throw DomainError("OU m must be finite");
}

void RegimeParams::validate() const
{
    if (regime_index < 1)
        throw DataError("regime indices are 1-based");
    if (!(sigma_bar > 0.0))
        throw DataError("regime " + std::to_string(regime_index)
                        + " has nonpositive sigma_bar");
    if (hardy_var < 0.0)
        throw DataError("regime " + std::to_string(regime_index)
                        + " has negative hardy_var");
    if (ou)
        ou->validate();
}

int RegimeCalendar::regime_for_date(Date date) const
{
    const auto it = labels.find(date);
    if (it == labels.end())
        throw DataError("no regime label for " + date.to_string()
                        + " (labels are external inputs; nothing is inferred)");
    return it->second;
}

Date RegimeCalendar::next_switch_after(Date date) const
{
    if (!(switch_interval > 0.0))
        throw DomainError("switch_interval must be positive");
    // Boundaries every switch_interval years (ACT/365) from Jan 1 of the
    // date's year; with the default 1y interval this is the next Jan 1.
    const Date anchor = Date::from_ymd(date.year(), 1, 1);
    const std::int32_t interval_days =
        static_cast<std::int32_t>(std::llround(switch_interval * 365.0));
    Date boundary = anchor;
    while (boundary <= date)
        boundary = boundary.plus_days(interval_days);
    return boundary;
}

std::vector<int> simulate_regime_sequence(const MarkovChain& chain,
                                          std::size_t n_steps, std::uint64_t seed)
{
    if (n_steps < 1)
        throw DataError("regime sequence needs at least one step");

    kernels::SplitMix64 rng(seed);
    const auto draw_from = [&](const std::vector<double>& probs) {
        const double u = rng.next_unit();
        double cum = 0.0;
        for (std::size_t j = 0; j < probs.size(); ++j) {
            cum += probs[j];
            if (u < cum)
                return static_cast<int>(j) + 1;
        }
        return static_cast<int>(probs.size()); // u landed in rounding slack
    };

    std::vector<int> seq;
    seq.reserve(n_steps);
    seq.push_back(draw_from(chain.initial()));
    for (std::size_t k = 1; k < n_steps; ++k)
        seq.push_back(draw_from(chain.transition()[seq.back() - 1]));
    return seq;
}

ReturnMoments regime_return_distribution(const RegimeParams& params, double horizon)
{
    if (!(horizon > 0.0))
        throw DomainError("horizon must be positive");
    ReturnMoments m;
    const double var_rate = params.sigma_bar * params.sigma_bar;
    m.mean = (params.mu - 0.5 * var_rate) * horizon;
    m.variance = var_rate * horizon;
    return m;
}

std::map<Date, int> load_regime_labels(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open regime label file '" + path + "'");

    std::map<Date, int> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line_no == 1 && line == "quote_date,regime")
            continue; // header optional
        const std::string ctx = path + " line " + std::to_string(line_no);
        std::stringstream ss(line);
        std::string date_s, regime_s;
        if (!std::getline(ss, date_s, ',') || !std::getline(ss, regime_s))
            throw DataError(ctx + ": expected 'quote_date,regime'");
        int regime = 0;
        try {
            regime = std::stoi(regime_s);
        } catch (const std::exception&) {
            throw DataError(ctx + ": bad regime index '" + regime_s + "'");
        }
        if (regime < 1)
            throw DataError(ctx + ": regime indices are 1-based");
        labels[Date::parse(date_s)] = regime;
    }
    return labels;
}

namespace {

RegimeParams regime_params_from_json(const nlohmann::json& j)
{
    RegimeParams p;
    p.regime_index = j.at("regime_index").get<int>();
    p.sigma_bar = j.at("sigma_bar").get<double>();
    p.mu = j.value("mu", 0.0);
    p.hardy_mean = j.value("hardy_mean", 0.0);
    p.hardy_var = j.value("hardy_var", 0.0);
    if (j.contains("ou")) {
        OuParams ou;
        ou.alpha = j.at("ou").at("alpha").get<double>();
        ou.m = j.at("ou").at("m").get<double>();
        ou.beta = j.at("ou").at("beta").get<double>();
        p.ou = ou;
    }
    p.validate();
    return p;
}

} // namespace

std::vector<RegimeParams> load_regime_params(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open regime parameter file '" + path + "'");
    std::vector<RegimeParams> out;
    try {
        const auto j = nlohmann::json::parse(in);
        if (!j.is_array())
            throw DataError(path + ": expected a JSON list of regime parameter sets");
        for (const auto& item : j)
            out.push_back(regime_params_from_json(item));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
    if (out.empty())
        throw DataError(path + ": no regimes defined");
    return out;
}

std::string regime_params_to_json(const std::vector<RegimeParams>& params)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : params) {
        nlohmann::json j;
        j["regime_index"] = p.regime_index;
        j["mu"] = p.mu;
        j["sigma_bar"] = p.sigma_bar;
        if (p.ou) {
            j["ou"] = {{"alpha", p.ou->alpha}, {"m", p.ou->m}, {"beta", p.ou->beta}};
        }
        j["hardy_mean"] = p.hardy_mean;
        j["hardy_var"] = p.hardy_var;
        arr.push_back(std::move(j));
    }
    return arr.dump(2);
}

} // namespace rsvol
