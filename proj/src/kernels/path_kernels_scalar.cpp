#include "rsvol/kernels/path_step.hpp"

#include "rsvol/kernels/fastmath.hpp"
#include "rsvol/kernels/rng.hpp"

namespace rsvol::kernels {

// Reference lane. The AVX2 lane replicates this arithmetic operation for
// operation (same associativity, no FMA), so both produce identical bits;
// the equivalence test in tests/test_kernels.cpp asserts exactly that.
void advance_step_scalar(const std::uint64_t* path_seeds, double* y, double* logx,
                         std::size_t n, std::uint64_t draw_base, const StepParams& p)
{
    const std::uint64_t off1 = (draw_base + 1) * kGamma;
    const std::uint64_t off2 = (draw_base + 2) * kGamma;

    for (std::size_t i = 0; i < n; ++i) {
        const double u_1 = to_unit_open(mix64(path_seeds[i] + off1));
        const double u_2 = to_unit_open(mix64(path_seeds[i] + off2));
        const double z1 = norm_inv(u_1);
        const double z2 = norm_inv(u_2);

        const double t1 = p.rho * z1;
        const double t2 = p.rho_comp * z2;
        const double w2 = t1 + t2; // standardized dW2

        const double sig = fast_exp(y[i]); // left-endpoint volatility
        const double sig2 = sig * sig;
        const double a1 = p.half_dt * sig2;
        const double a2 = p.drift_dt - a1;
        const double a3 = p.sqrt_dt * sig;
        const double a4 = a3 * z1;
        logx[i] = (logx[i] + a2) + a4;

        const double b1 = p.ou_decay * y[i];
        const double b2 = p.ou_mean_term + b1;
        const double b3 = p.ou_sd * w2;
        y[i] = b2 + b3;
    }
}

} // namespace rsvol::kernels
