#pragma once

#include <cstddef>
#include <cstdint>

namespace rsvol::kernels {

/// Per-step constants for advancing a block of paths through one time step
/// of the (regime-switching) exponential-OU dynamics. All paths share the
/// same active regime, so these are scalars.
struct StepParams {
    double drift_dt = 0.0;     // (r or mu_i) * dt
    double half_dt = 0.0;      // 0.5 * dt
    double sqrt_dt = 0.0;      // sqrt(dt)
    double ou_decay = 0.0;     // e^{-alpha dt}
    double ou_mean_term = 0.0; // m (1 - e^{-alpha dt})
    double ou_sd = 0.0;        // sqrt(nu^2 (1 - e^{-2 alpha dt}))  (exact transition sd)
    double rho = 0.0;          // corr(dW1, dW2)
    double rho_comp = 0.0;     // sqrt(1 - rho^2)
};

/// Advances paths [0, n) one step in place. For path i the step consumes
/// draws (draw_base, draw_base+1) of the stream seeded with path_seeds[i]:
///   z1, z2 ~ iid N(0,1)
///   u2  = rho z1 + sqrt(1-rho^2) z2          (standardized dW2)
///   sig = exp(y_i)                            (left-endpoint volatility)
///   logx_i += drift_dt - half_dt sig^2 + sqrt_dt sig z1
///   y_i     = ou_mean_term + ou_decay y_i + ou_sd u2   (exact OU transition)
using StepFn = void (*)(const std::uint64_t* path_seeds, double* y, double* logx,
                        std::size_t n, std::uint64_t draw_base, const StepParams& p);

void advance_step_scalar(const std::uint64_t* path_seeds, double* y, double* logx,
                         std::size_t n, std::uint64_t draw_base, const StepParams& p);

#if defined(__x86_64__) || defined(_M_X64)
#define RSVOL_HAVE_AVX2_KERNELS 1
/// AVX2 variant, bit-identical to advance_step_scalar (shared polynomial
/// kernels, no FMA). Must only be called when the CPU supports AVX2.
void advance_step_avx2(const std::uint64_t* path_seeds, double* y, double* logx,
                       std::size_t n, std::uint64_t draw_base, const StepParams& p);
#else
#define RSVOL_HAVE_AVX2_KERNELS 0
#endif

enum class Lane { Auto, Scalar, Avx2 };

const char* lane_name(Lane lane);
Lane lane_from_string(const char* name); // throws DataError on unknown name

/// True when the running CPU can execute the AVX2 lane.
bool cpu_has_avx2();

/// Resolves Auto to the best available lane; throws DomainError when Avx2
/// is forced on a CPU without it.
Lane resolve_lane(Lane requested);

StepFn step_fn_for(Lane resolved);

} // namespace rsvol::kernels
