#include "rsvol/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <thread>

#include "rsvol/errors.hpp"
#include "rsvol/kernels/fastmath.hpp"
#include "rsvol/kernels/rng.hpp"

namespace rsvol {

void SimConfig::validate() const
{
    if (n_paths < 1)
        throw DataError("n_paths must be at least 1");
    if (!(horizon > 0.0))
        throw DomainError("horizon must be positive");
    if (!(std::abs(rho) <= 1.0))
        throw DomainError("rho must lie in [-1, 1]");
    if (!std::isfinite(gamma_mpvr))
        throw DomainError("gamma_mpvr must be finite");
}

std::size_t default_n_steps(double horizon)
{
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(horizon * 2520.0)));
}

std::span<const double> PathBundle::asset_row(std::size_t path) const
{
    if (!has_grids())
        throw DataError("path grids were not stored (set SimConfig::store_paths)");
    return {assets.data() + path * (n_steps + 1), n_steps + 1};
}

std::span<const double> PathBundle::sigma_row(std::size_t path) const
{
    if (!has_grids())
        throw DataError("path grids were not stored (set SimConfig::store_paths)");
    return {sigmas.data() + path * (n_steps + 1), n_steps + 1};
}

std::span<const double> PathBundle::y_row(std::size_t path) const
{
    if (!has_grids())
        throw DataError("path grids were not stored (set SimConfig::store_paths)");
    return {ys.data() + path * (n_steps + 1), n_steps + 1};
}

std::vector<double> ou_exact_sample(const OuParams& params, double y0, double t,
                                    std::size_t draws, std::uint64_t seed)
{
    params.validate();
    if (!(t >= 0.0))
        throw DomainError("t must be nonnegative");

    std::vector<double> out(draws);
    if (t == 0.0) {
        std::fill(out.begin(), out.end(), y0);
        return out;
    }
    const double decay = std::exp(-params.alpha * t);
    const double mean = params.m + (y0 - params.m) * decay;
    const double sd = std::sqrt(params.nu_sq() * (1.0 - decay * decay));
    for (std::size_t i = 0; i < draws; ++i)
        out[i] = mean + sd * kernels::norm_inv(kernels::to_unit_open(
                               kernels::stream_at(seed, i)));
    return out;
}

namespace {

// Constants of one exact OU transition step under one regime, assembled
// for the batch kernels.
kernels::StepParams make_step_params(const RegimeParams& rp, double dt,
                                     const SimConfig& cfg, double rate)
{
    const OuParams& ou = *rp.ou;
    kernels::StepParams p;
    const double drift =
        cfg.drift == DriftMode::RiskNeutral ? rate : rp.mu;
    p.drift_dt = drift * dt;
    p.half_dt = 0.5 * dt;
    p.sqrt_dt = std::sqrt(dt);
    p.ou_decay = std::exp(-ou.alpha * dt);
    p.rho = cfg.rho;
    p.rho_comp = std::sqrt(1.0 - cfg.rho * cfg.rho);
    // Constant market price of volatility risk shifts the long-run mean
    // under the pricing measure; gamma = 0 leaves the physical dynamics.
    double m_eff = ou.m;
    if (cfg.drift == DriftMode::RiskNeutral && cfg.gamma_mpvr != 0.0)
        m_eff -= ou.beta * p.rho_comp * cfg.gamma_mpvr / ou.alpha;
    p.ou_mean_term = m_eff * (1.0 - p.ou_decay);
    p.ou_sd = std::sqrt(ou.nu_sq() * (1.0 - p.ou_decay * p.ou_decay));
    return p;
}

void run_chunks(std::size_t n_paths, unsigned n_threads,
                const std::function<void(std::size_t, std::size_t)>& work)
{
    unsigned nt = n_threads ? n_threads : std::max(1u, std::thread::hardware_concurrency());
    nt = static_cast<unsigned>(std::min<std::size_t>(nt, n_paths));
    if (nt <= 1) {
        work(0, n_paths);
        return;
    }
    const std::size_t chunk = (n_paths + nt - 1) / nt;
    std::vector<std::thread> workers;
    workers.reserve(nt);
    for (unsigned t = 0; t < nt; ++t) {
        const std::size_t b = t * chunk;
        const std::size_t e = std::min(n_paths, b + chunk);
        if (b >= e)
            break;
        workers.emplace_back(work, b, e);
    }
    for (auto& w : workers)
        w.join();
}

} // namespace

PathBundle simulate_rsexpou_paths(const std::vector<RegimeParams>& regimes,
                                  const std::vector<int>& regime_seq,
                                  const RegimeCalendar& calendar,
                                  const SimConfig& cfg, double spot0, double rate)
{
    cfg.validate();
    if (!(spot0 > 0.0))
        throw DataError("spot0 must be positive");
    if (regimes.empty())
        throw DataError("no regimes supplied");
    if (regime_seq.empty())
        throw DataError("regime sequence is empty");

    std::map<int, const RegimeParams*> by_index;
    for (const auto& rp : regimes) {
        rp.validate();
        if (!rp.ou)
            throw DataError("regime " + std::to_string(rp.regime_index)
                            + " lacks OU parameters required for simulation");
        by_index[rp.regime_index] = &rp;
    }

    const double interval = calendar.switch_interval;
    if (!(interval > 0.0))
        throw DomainError("switch_interval must be positive");
    const auto needed = static_cast<std::size_t>(
        std::max(1.0, std::ceil(cfg.horizon / interval - 1e-12)));
    if (regime_seq.size() < needed)
        throw DataError("regime sequence has " + std::to_string(regime_seq.size())
                        + " entries but the horizon needs " + std::to_string(needed));
    for (int idx : regime_seq)
        if (!by_index.count(idx))
            throw DataError("regime sequence references undefined regime "
                            + std::to_string(idx));

    const std::size_t n_steps = cfg.n_steps ? cfg.n_steps : default_n_steps(cfg.horizon);
    const double dt = cfg.horizon / static_cast<double>(n_steps);

    std::map<int, kernels::StepParams> params_by_regime;
    for (const auto& [idx, rp] : by_index)
        params_by_regime.emplace(idx, make_step_params(*rp, dt, cfg, rate));

    // Active regime per step, attributed by the step midpoint so boundary
    // rounding cannot flip a step's regime.
    std::vector<const kernels::StepParams*> step_params(n_steps);
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double mid = (static_cast<double>(k) + 0.5) * dt;
        const auto j = std::min(static_cast<std::size_t>(mid / interval),
                                regime_seq.size() - 1);
        step_params[k] = &params_by_regime.at(regime_seq[j]);
    }

    const std::size_t first_regime_k0 = 0;
    const double mid0 = (static_cast<double>(first_regime_k0) + 0.5) * dt;
    const auto j0 = std::min(static_cast<std::size_t>(mid0 / interval),
                             regime_seq.size() - 1);
    const double y0 = cfg.y0.value_or(by_index.at(regime_seq[j0])->ou->m);
    const double logx0 = std::log(spot0);

    PathBundle bundle;
    bundle.n_paths = cfg.n_paths;
    bundle.n_steps = n_steps;
    bundle.dt = dt;
    bundle.drift = cfg.drift;
    bundle.terminal_assets.resize(cfg.n_paths);

    const std::size_t cols = n_steps + 1;
    if (cfg.store_paths) {
        bundle.assets.resize(cfg.n_paths * cols);
        bundle.sigmas.resize(cfg.n_paths * cols);
        bundle.ys.resize(cfg.n_paths * cols);
    }

    std::vector<std::uint64_t> seeds(cfg.n_paths);
    for (std::size_t i = 0; i < cfg.n_paths; ++i)
        seeds[i] = kernels::path_seed(cfg.seed, i);

    std::vector<double> y(cfg.n_paths, y0);
    std::vector<double> logx(cfg.n_paths, logx0);

    const kernels::StepFn step = kernels::step_fn_for(kernels::resolve_lane(cfg.lane));

    const auto work = [&](std::size_t b, std::size_t e) {
        if (cfg.store_paths) {
            const double sigma0 = kernels::fast_exp(y0);
            for (std::size_t i = b; i < e; ++i) {
                bundle.assets[i * cols] = spot0;
                bundle.sigmas[i * cols] = sigma0;
                bundle.ys[i * cols] = y0;
            }
        }
        for (std::size_t k = 0; k < n_steps; ++k) {
            step(seeds.data() + b, y.data() + b, logx.data() + b, e - b,
                 2 * k, *step_params[k]);
            if (cfg.store_paths) {
                for (std::size_t i = b; i < e; ++i) {
                    bundle.assets[i * cols + k + 1] = kernels::fast_exp(logx[i]);
                    bundle.sigmas[i * cols + k + 1] = kernels::fast_exp(y[i]);
                    bundle.ys[i * cols + k + 1] = y[i];
                }
            }
        }
        for (std::size_t i = b; i < e; ++i)
            bundle.terminal_assets[i] = kernels::fast_exp(logx[i]);
    };
    run_chunks(cfg.n_paths, cfg.n_threads, work);

    return bundle;
}

double ergodic_sigma_bar(std::span<const double> vol_path, double dt)
{
    if (vol_path.size() < 2)
        throw DataError("ergodic_sigma_bar needs a path of length >= 2");
    if (!(dt > 0.0))
        throw DomainError("dt must be positive");
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < vol_path.size(); ++k) {
        const double s0 = vol_path[k];
        const double s1 = vol_path[k + 1];
        acc += 0.5 * (s0 * s0 + s1 * s1) * dt;
    }
    const double horizon = dt * static_cast<double>(vol_path.size() - 1);
    return std::sqrt(acc / horizon);
}

double sigma_bar_from_returns(std::span<const double> log_returns, double dt)
{
    if (log_returns.size() < 2)
        throw DataError("sigma_bar_from_returns needs at least 2 returns");
    if (!(dt > 0.0))
        throw DomainError("dt must be positive");
    const auto n = static_cast<double>(log_returns.size());
    double mean = 0.0;
    for (double r : log_returns)
        mean += r;
    mean /= n;
    double ss = 0.0;
    for (double r : log_returns) {
        const double d = r - mean;
        ss += d * d;
    }
    return std::sqrt(ss / (n - 1.0)) / std::sqrt(dt);
}

McPrice mc_option_price(const PathBundle& bundle, double strike, double rate,
                        double horizon)
{
    if (bundle.drift != DriftMode::RiskNeutral)
        throw DataError("mc_option_price needs a risk-neutral bundle "
                        "(this one was generated in physical mode)");
    if (bundle.terminal_assets.empty())
        throw DataError("bundle holds no paths");

    const auto n = static_cast<double>(bundle.terminal_assets.size());
    double sum = 0.0, sum_sq = 0.0;
    for (double xT : bundle.terminal_assets) {
        const double payoff = std::max(xT - strike, 0.0);
        sum += payoff;
        sum_sq += payoff * payoff;
    }
    const double mean = sum / n;
    const double var = n > 1.0 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0))
                               : 0.0;
    const double disc = std::exp(-rate * horizon);
    McPrice out;
    out.price = disc * mean;
    out.std_error = disc * std::sqrt(var / n);
    return out;
}

void dump_paths_csv(const PathBundle& bundle, const std::string& path)
{
    if (!bundle.has_grids())
        throw DataError("path dump needs full grids (set SimConfig::store_paths)");
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write path dump '" + path + "'");
    out << "path_id,step,time,asset,sigma,y\n";
    out.precision(17);
    const std::size_t cols = bundle.n_steps + 1;
    for (std::size_t i = 0; i < bundle.n_paths; ++i)
        for (std::size_t k = 0; k < cols; ++k)
            out << i << ',' << k << ',' << static_cast<double>(k) * bundle.dt << ','
                << bundle.assets[i * cols + k] << ',' << bundle.sigmas[i * cols + k]
                << ',' << bundle.ys[i * cols + k] << '\n';
    if (!out)
        throw DataError("write failed for '" + path + "'");
}

} // namespace rsvol
