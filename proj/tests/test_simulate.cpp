#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "oracles.hpp"
#include "rsvol/black_scholes.hpp"
#include "rsvol/errors.hpp"
#include "rsvol/kernels/fastmath.hpp"
#include "rsvol/kernels/rng.hpp"
#include "rsvol/simulate.hpp"

using namespace rsvol;

namespace {

RegimeParams one_regime(double alpha, double m, double beta, double mu = 0.0)
{
    RegimeParams p;
    p.regime_index = 1;
    p.mu = mu;
    p.sigma_bar = std::exp(m + beta * beta / (4.0 * alpha));
    p.ou = OuParams{alpha, m, beta};
    return p;
}

// sqrt of E[e^{2Y}] under N(m, nu^2), by quadrature (independent of the
// closed form e^{m + nu^2}).
double effective_vol_quadrature(double m, double nu_sq)
{
    const double nu = std::sqrt(nu_sq);
    const auto integrand = [&](double y) {
        const double z = (y - m) / nu;
        return std::exp(2.0 * y) * std::exp(-0.5 * z * z)
               / (nu * std::sqrt(2.0 * M_PI));
    };
    return std::sqrt(oracles::simpson(integrand, m - 12.0 * nu, m + 12.0 * nu, 1e-13));
}

} // namespace

TEST_CASE("ou_exact_sample: t = 0 returns y0 exactly")
{
    const OuParams ou{4.0, -2.0, 1.0};
    const auto s = ou_exact_sample(ou, 0.3, 0.0, 1000, 1);
    for (double v : s)
        CHECK(v == 0.3);
}

TEST_CASE("ou_exact_sample: finite-t moments match the transition law")
{
    const OuParams ou{4.0, -2.0, 1.0};
    const double y0 = 0.0, t = 0.5;
    const std::size_t n = 1000000;
    const auto s = ou_exact_sample(ou, y0, t, n, 77);

    const double decay = std::exp(-ou.alpha * t);
    const double want_mean = ou.m + (y0 - ou.m) * decay;
    const double want_var = ou.nu_sq() * (1.0 - decay * decay);
    const double mean = oracles::mean(s);
    const double var = oracles::sample_variance(s);
    const double se_mean = std::sqrt(want_var / n);
    const double se_var = want_var * std::sqrt(2.0 / (n - 1.0));
    CHECK(std::abs(mean - want_mean) <= 3.0 * se_mean);
    CHECK(std::abs(var - want_var) <= 3.0 * se_var);
}

TEST_CASE("ou_exact_sample: long-horizon limit is the invariant law")
{
    const OuParams ou{4.0, -2.0, 1.0};
    const double t = 50.0 / ou.alpha;
    const std::size_t n = 1000000;
    const auto s = ou_exact_sample(ou, 0.0, t, n, 123);
    const double want_var = ou.nu_sq(); // beta^2 / (2 alpha)
    const double mean = oracles::mean(s);
    const double var = oracles::sample_variance(s);
    CHECK(std::abs(mean - ou.m) <= 3.0 * std::sqrt(want_var / n));
    CHECK(std::abs(var - want_var) <= 3.0 * want_var * std::sqrt(2.0 / (n - 1.0)));
}

TEST_CASE("path Y(T) law is dt-invariant (exact transitions): KS check")
{
    const auto regime = one_regime(30.0, -1.8, 1.0);
    const RegimeCalendar cal;
    SimConfig cfg;
    cfg.n_paths = 10000;
    cfg.horizon = 0.5;
    cfg.rho = 0.3;
    cfg.seed = 5;
    cfg.store_paths = true;
    cfg.n_steps = 64;

    const auto coarse = simulate_rsexpou_paths({regime}, {1}, cal, cfg, 100.0, 0.0);
    cfg.n_steps = 128;
    cfg.seed = 6; // independent sample for the two-sample test
    const auto fine = simulate_rsexpou_paths({regime}, {1}, cal, cfg, 100.0, 0.0);

    std::vector<double> ya, yb;
    for (std::size_t i = 0; i < cfg.n_paths; ++i) {
        ya.push_back(coarse.y_row(i).back());
        yb.push_back(fine.y_row(i).back());
    }
    const double d = oracles::ks_statistic(ya, yb);
    // 1% critical value for the two-sample statistic at n = m = 1e4.
    const double crit = 1.628 * std::sqrt(2.0 / 10000.0);
    CHECK(d < crit);
}

TEST_CASE("beta = 0 gives the deterministic sigma curve")
{
    RegimeParams regime = one_regime(10.0, std::log(0.15), 0.0);
    const RegimeCalendar cal;
    SimConfig cfg;
    cfg.n_paths = 3;
    cfg.n_steps = 100;
    cfg.horizon = 1.0;
    cfg.seed = 3;
    cfg.store_paths = true;
    cfg.y0 = std::log(0.3); // start away from m to see the decay

    const auto bundle = simulate_rsexpou_paths({regime}, {1}, cal, cfg, 100.0, 0.0);
    const double y0 = *cfg.y0, m = regime.ou->m, alpha = regime.ou->alpha;
    for (std::size_t i = 0; i < cfg.n_paths; ++i) {
        const auto sig = bundle.sigma_row(i);
        for (std::size_t k = 0; k <= cfg.n_steps; ++k) {
            const double t = bundle.dt * static_cast<double>(k);
            const double want = std::exp(m + (y0 - m) * std::exp(-alpha * t));
            CHECK(sig[k] == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("single-regime sequence reduces to plain expOU")
{
    const auto r1 = one_regime(60.0, -2.0, 0.8);
    RegimeParams r2 = r1;
    r2.regime_index = 2;

    RegimeCalendar cal;
    cal.switch_interval = 0.25;
    SimConfig cfg;
    cfg.n_paths = 64;
    cfg.n_steps = 128;
    cfg.horizon = 1.0;
    cfg.seed = 9;

    // Alternating between two regimes with identical parameters must match
    // staying in one regime for the whole horizon.
    const auto plain = simulate_rsexpou_paths({r1}, {1, 1, 1, 1}, cal, cfg, 90.0, 0.01);
    const auto mixed =
        simulate_rsexpou_paths({r1, r2}, {1, 2, 1, 2}, cal, cfg, 90.0, 0.01);
    REQUIRE(plain.terminal_assets.size() == mixed.terminal_assets.size());
    CHECK(std::memcmp(plain.terminal_assets.data(), mixed.terminal_assets.data(),
                      plain.terminal_assets.size() * sizeof(double))
          == 0);
}

TEST_CASE("risk-neutral r = 0: terminal mean is the martingale value")
{
    const auto regime = one_regime(40.0, -2.0, 0.9);
    const RegimeCalendar cal;
    SimConfig cfg;
    cfg.n_paths = 100000;
    cfg.n_steps = 50;
    cfg.horizon = 0.5;
    cfg.seed = 21;

    const auto bundle = simulate_rsexpou_paths({regime}, {1}, cal, cfg, 100.0, 0.0);
    const double mean = oracles::mean(bundle.terminal_assets);
    const double sd = std::sqrt(oracles::sample_variance(bundle.terminal_assets));
    const double se = sd / std::sqrt(static_cast<double>(cfg.n_paths));
    CHECK(std::abs(mean - 100.0) <= 3.0 * se);
}

TEST_CASE("generated Wiener increments carry the requested correlation")
{
    for (double rho : {-0.5, 0.0, 0.7}) {
        const auto regime = one_regime(25.0, -1.9, 0.7);
        const RegimeCalendar cal;
        SimConfig cfg;
        cfg.n_paths = 200;
        cfg.n_steps = 250;
        cfg.horizon = 0.5;
        cfg.rho = rho;
        cfg.seed = 31;
        cfg.store_paths = true;

        const auto b = simulate_rsexpou_paths({regime}, {1}, cal, cfg, 100.0, 0.0);

        // Reconstruct the standardized increments from the recorded paths:
        // z1 from the asset update, u2 from the OU update.
        const double dt = b.dt;
        const double sqrt_dt = std::sqrt(dt);
        const double alpha = regime.ou->alpha, m = regime.ou->m;
        const double decay = std::exp(-alpha * dt);
        const double ou_sd =
            std::sqrt(regime.ou->nu_sq() * (1.0 - decay * decay));
        std::vector<double> z1s, u2s;
        for (std::size_t i = 0; i < cfg.n_paths; ++i) {
            const auto ys = b.y_row(i);
            const auto xs = b.asset_row(i);
            const auto sig = b.sigma_row(i);
            for (std::size_t k = 0; k < cfg.n_steps; ++k) {
                const double s = sig[k];
                const double dlx = std::log(xs[k + 1] / xs[k]);
                z1s.push_back((dlx + 0.5 * s * s * dt) / (s * sqrt_dt));
                u2s.push_back((ys[k + 1] - m * (1.0 - decay) - decay * ys[k]) / ou_sd);
            }
        }
        const std::size_t n = z1s.size();
        double sxy = 0.0, sxx = 0.0, syy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sxy += z1s[i] * u2s[i];
            sxx += z1s[i] * z1s[i];
            syy += u2s[i] * u2s[i];
        }
        const double corr = sxy / std::sqrt(sxx * syy);
        const double se = (1.0 - rho * rho) / std::sqrt(static_cast<double>(n));
        CHECK(std::abs(corr - rho) <= 3.0 * se);
    }
}

TEST_CASE("ergodic_sigma_bar: constant path and the ergodic limit")
{
    std::vector<double> flat(101, 0.2);
    CHECK(ergodic_sigma_bar(flat, 0.01) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK_THROWS_AS((void)ergodic_sigma_bar(std::vector<double>{0.2}, 0.01),
                    DataError);

    // alpha = 100, m = log(0.12), beta = 0.5 over 10 years: the single-path
    // time average lands within 1% of the invariant-law value, checked
    // against the quadrature oracle rather than the closed form.
    const double alpha = 100.0, m = std::log(0.12), beta = 0.5;
    const auto regime = one_regime(alpha, m, beta);
    RegimeCalendar cal;
    cal.switch_interval = 10.0;
    SimConfig cfg;
    cfg.n_paths = 1;
    cfg.n_steps = 25200;
    cfg.horizon = 10.0;
    cfg.seed = 314;
    cfg.store_paths = true;

    const auto b = simulate_rsexpou_paths({regime}, {1}, cal, cfg, 100.0, 0.0);
    const double est = ergodic_sigma_bar(b.sigma_row(0), b.dt);
    const double nu_sq = beta * beta / (2.0 * alpha);
    const double oracle = effective_vol_quadrature(m, nu_sq);
    CHECK(oracle == doctest::Approx(std::exp(m + nu_sq)).epsilon(1e-10));
    CHECK(std::abs(est - oracle) / oracle < 0.01);
}

TEST_CASE("doubling the horizon shrinks the ergodic estimator's spread")
{
    const auto regime = one_regime(100.0, std::log(0.12), 0.5);
    RegimeCalendar cal;
    cal.switch_interval = 100.0;

    const auto spread = [&](double horizon, std::uint64_t seed) {
        SimConfig cfg;
        cfg.n_paths = 100;
        cfg.n_steps = static_cast<std::size_t>(horizon * 504.0);
        cfg.horizon = horizon;
        cfg.seed = seed;
        cfg.store_paths = true;
        const auto b = simulate_rsexpou_paths({regime}, {1}, cal, cfg, 100.0, 0.0);
        std::vector<double> ests;
        for (std::size_t i = 0; i < cfg.n_paths; ++i)
            ests.push_back(ergodic_sigma_bar(b.sigma_row(i), b.dt));
        return std::sqrt(oracles::sample_variance(ests));
    };
    CHECK(spread(4.0, 55) < spread(2.0, 54));
}

TEST_CASE("sigma_bar_from_returns")
{
    // Deterministic sequence with sample sd exactly s.
    const double s = 0.008044;
    const std::size_t n = 252;
    const double c = s * std::sqrt((n - 1.0) / n);
    std::vector<double> returns(n);
    for (std::size_t i = 0; i < n; ++i)
        returns[i] = (i % 2 ? c : -c);
    const double est = sigma_bar_from_returns(returns, 1.0 / 252.0);
    CHECK(est == doctest::Approx(0.1277).epsilon(1e-3)); // 0.008044*sqrt(252)

    // i.i.d. normal returns: estimator within 3 standard errors.
    const std::size_t big = 100000;
    std::vector<double> z(big);
    for (std::size_t i = 0; i < big; ++i)
        z[i] = 0.008044
               * kernels::norm_inv(kernels::to_unit_open(kernels::stream_at(9, i)));
    const double est2 = sigma_bar_from_returns(z, 1.0 / 252.0);
    const double se = 0.1277 / std::sqrt(2.0 * (big - 1.0));
    CHECK(std::abs(est2 - 0.1277) <= 3.0 * se);

    std::vector<double> constant(100, 0.0);
    CHECK(sigma_bar_from_returns(constant, 1.0 / 252.0) == 0.0);
    CHECK_THROWS_AS((void)sigma_bar_from_returns(std::vector<double>{0.1}, 0.1),
                    DataError);
}

TEST_CASE("mc_option_price against Black-Scholes in the constant-vol limit")
{
    // beta = 0 and y0 = m freeze sigma at e^m: the simulator must agree
    // with the closed form within Monte Carlo error.
    const double m = std::log(0.2);
    const auto regime = one_regime(50.0, m, 0.0);
    const RegimeCalendar cal;
    SimConfig cfg;
    cfg.n_paths = 100000;
    cfg.n_steps = 128;
    cfg.horizon = 0.5;
    cfg.seed = 65;

    const double spot = 100.0, rate = 0.03, strike = 102.0;
    const auto b = simulate_rsexpou_paths({regime}, {1}, cal, cfg, spot, rate);
    const auto mc = mc_option_price(b, strike, rate, cfg.horizon);
    const double bs =
        bs_price({spot, strike, rate, std::exp(m), cfg.horizon}, OptionType::Call);
    CHECK(std::abs(mc.price - bs) <= 3.0 * mc.std_error);
    CHECK(mc.std_error < 0.1);

    // Deep out of the money: worthless.
    const auto far = mc_option_price(b, 10.0 * spot, rate, cfg.horizon);
    CHECK(far.price == 0.0);
}

TEST_CASE("mc_option_price refuses physical-mode bundles")
{
    const auto regime = one_regime(50.0, std::log(0.2), 0.3, 0.08);
    const RegimeCalendar cal;
    SimConfig cfg;
    cfg.n_paths = 100;
    cfg.n_steps = 16;
    cfg.horizon = 0.25;
    cfg.drift = DriftMode::Physical;
    const auto b = simulate_rsexpou_paths({regime}, {1}, cal, cfg, 100.0, 0.02);
    CHECK_THROWS_AS((void)mc_option_price(b, 100.0, 0.02, 0.25), DataError);
}

TEST_CASE("fixed seed is byte-identical across thread counts and lanes")
{
    const auto r1 = one_regime(80.0, -2.1, 0.6);
    RegimeParams r2 = one_regime(120.0, -1.7, 0.9);
    r2.regime_index = 2;
    RegimeCalendar cal;
    cal.switch_interval = 0.5;
    SimConfig cfg;
    cfg.n_paths = 501; // odd on purpose: exercises the SIMD remainder
    cfg.n_steps = 100;
    cfg.horizon = 1.0;
    cfg.rho = -0.3;
    cfg.seed = 97;

    cfg.n_threads = 1;
    const auto a = simulate_rsexpou_paths({r1, r2}, {1, 2}, cal, cfg, 100.0, 0.01);
    cfg.n_threads = 2;
    const auto b = simulate_rsexpou_paths({r1, r2}, {1, 2}, cal, cfg, 100.0, 0.01);
    cfg.n_threads = 7;
    const auto c = simulate_rsexpou_paths({r1, r2}, {1, 2}, cal, cfg, 100.0, 0.01);
    CHECK(std::memcmp(a.terminal_assets.data(), b.terminal_assets.data(),
                      cfg.n_paths * sizeof(double))
          == 0);
    CHECK(std::memcmp(a.terminal_assets.data(), c.terminal_assets.data(),
                      cfg.n_paths * sizeof(double))
          == 0);

    if (kernels::cpu_has_avx2()) {
        cfg.n_threads = 2;
        cfg.lane = kernels::Lane::Scalar;
        const auto s = simulate_rsexpou_paths({r1, r2}, {1, 2}, cal, cfg, 100.0, 0.01);
        CHECK(std::memcmp(a.terminal_assets.data(), s.terminal_assets.data(),
                          cfg.n_paths * sizeof(double))
              == 0);
    }
}

TEST_CASE("input validation")
{
    const auto regime = one_regime(10.0, -2.0, 0.5);
    const RegimeCalendar cal;
    SimConfig cfg;
    cfg.n_paths = 10;
    cfg.n_steps = 10;
    cfg.horizon = 2.5;
    // 2.5y horizon with 1y switches needs 3 regime entries.
    CHECK_THROWS_AS((void)simulate_rsexpou_paths({regime}, {1, 1}, cal, cfg, 100.0, 0.0),
                    DataError);
    CHECK_NOTHROW((void)simulate_rsexpou_paths({regime}, {1, 1, 1}, cal, cfg, 100.0, 0.0));
    // Unknown regime index in the sequence.
    CHECK_THROWS_AS((void)simulate_rsexpou_paths({regime}, {1, 2, 1}, cal, cfg, 100.0, 0.0),
                    DataError);
    // Missing OU parameters.
    RegimeParams no_ou;
    no_ou.regime_index = 1;
    no_ou.sigma_bar = 0.2;
    cfg.horizon = 0.5;
    CHECK_THROWS_AS((void)simulate_rsexpou_paths({no_ou}, {1}, cal, cfg, 100.0, 0.0),
                    DataError);
    // rho outside [-1, 1].
    cfg.rho = 1.5;
    CHECK_THROWS_AS((void)simulate_rsexpou_paths({regime}, {1}, cal, cfg, 100.0, 0.0),
                    DomainError);
}

TEST_CASE("path dump CSV round-trips the grids")
{
    const auto regime = one_regime(20.0, -2.0, 0.4);
    const RegimeCalendar cal;
    SimConfig cfg;
    cfg.n_paths = 2;
    cfg.n_steps = 4;
    cfg.horizon = 0.1;
    cfg.store_paths = true;
    const auto b = simulate_rsexpou_paths({regime}, {1}, cal, cfg, 100.0, 0.0);

    const std::string path = "rsvol_test_paths.csv";
    dump_paths_csv(b, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "path_id,step,time,asset,sigma,y");
    std::size_t rows = 0;
    double pid, step, t, asset, sigma, y;
    char comma;
    while (in >> pid >> comma >> step >> comma >> t >> comma >> asset >> comma
              >> sigma >> comma >> y)
        ++rows;
    CHECK(rows == 2 * 5);
    in.close();
    std::remove(path.c_str());

    SimConfig no_grid_cfg;
    no_grid_cfg.n_paths = 2;
    no_grid_cfg.n_steps = 4;
    no_grid_cfg.horizon = 0.1;
    const auto no_grids =
        simulate_rsexpou_paths({regime}, {1}, cal, no_grid_cfg, 100.0, 0.0);
    CHECK_THROWS_AS(dump_paths_csv(no_grids, path), DataError);
}
