#include "rsvol/kernels/path_step.hpp"

#if RSVOL_HAVE_AVX2_KERNELS

#include <immintrin.h>

#include <cstdint>

#include "rsvol/kernels/fastmath.hpp"
#include "rsvol/kernels/rng.hpp"
#include "kernel_constants.hpp"

namespace rsvol::kernels {
namespace {

using namespace detail;

// 64-bit low-half multiply from 32-bit pieces (AVX2 has no vpmullq).
inline __m256i mullo64(__m256i a, __m256i b)
{
    const __m256i a_hi = _mm256_srli_epi64(a, 32);
    const __m256i b_hi = _mm256_srli_epi64(b, 32);
    const __m256i lo = _mm256_mul_epu32(a, b);
    const __m256i m1 = _mm256_mul_epu32(a, b_hi);
    const __m256i m2 = _mm256_mul_epu32(a_hi, b);
    const __m256i mid = _mm256_slli_epi64(_mm256_add_epi64(m1, m2), 32);
    return _mm256_add_epi64(lo, mid);
}

inline __m256i mix64_vec(__m256i z)
{
    z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 30));
    z = mullo64(z, _mm256_set1_epi64x(static_cast<long long>(0xBF58476D1CE4E5B9ull)));
    z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 27));
    z = mullo64(z, _mm256_set1_epi64x(static_cast<long long>(0x94D049BB133111EBull)));
    z = _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
    return z;
}

// Exact uint64 -> double for values below 2^53 (hi*2^32 + lo, both exact).
inline __m256d u53_to_f64(__m256i v)
{
    const __m256d magic = _mm256_set1_pd(0x1.0p52);
    const __m256i magic_bits = _mm256_castpd_si256(magic);
    const __m256i lo32 = _mm256_and_si256(v, _mm256_set1_epi64x(0xFFFFFFFFll));
    const __m256i hi32 = _mm256_srli_epi64(v, 32);
    const __m256d dlo =
        _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(lo32, magic_bits)), magic);
    const __m256d dhi =
        _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(hi32, magic_bits)), magic);
    return _mm256_add_pd(_mm256_mul_pd(dhi, _mm256_set1_pd(4294967296.0)), dlo);
}

inline __m256d unit_open(__m256i bits)
{
    const __m256d d = u53_to_f64(_mm256_srli_epi64(bits, 11));
    return _mm256_mul_pd(_mm256_add_pd(d, _mm256_set1_pd(0.5)),
                         _mm256_set1_pd(0x1.0p-53));
}

// exp on 4 lanes, same reduction/polynomial as fast_exp. Saturation and
// NaN lanes are blended in afterwards; the discarded main-path values for
// those lanes are harmless (conversions are defined, exceptions masked).
inline __m256d vexp(__m256d x)
{
    const __m256d t = _mm256_mul_pd(x, _mm256_set1_pd(kLog2E));
    const __m128i k32 = _mm256_cvtpd_epi32(t); // round to nearest even
    const __m256d kd = _mm256_cvtepi32_pd(k32);

    const __m256d m1 = _mm256_mul_pd(kd, _mm256_set1_pd(kLn2Hi));
    const __m256d r_hi = _mm256_sub_pd(x, m1);
    const __m256d m2 = _mm256_mul_pd(kd, _mm256_set1_pd(kLn2Lo));
    const __m256d r = _mm256_sub_pd(r_hi, m2);

    __m256d p = _mm256_set1_pd(kExpC[13]);
    for (int c = 12; c >= 0; --c)
        p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(kExpC[c]));

    const __m256i k64 = _mm256_cvtepi32_epi64(k32);
    const __m256i biased = _mm256_add_epi64(k64, _mm256_set1_epi64x(1023));
    const __m256d scale = _mm256_castsi256_pd(_mm256_slli_epi64(biased, 52));
    __m256d result = _mm256_mul_pd(p, scale);

    const __m256d sat = _mm256_set1_pd(kExpSaturate);
    const __m256d hi_mask = _mm256_cmp_pd(x, sat, _CMP_GE_OQ);
    const __m256d lo_mask = _mm256_cmp_pd(x, _mm256_sub_pd(_mm256_setzero_pd(), sat),
                                          _CMP_LE_OQ);
    const __m256d nan_mask = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
    const __m256d inf = _mm256_set1_pd(__builtin_inf());
    result = _mm256_blendv_pd(result, inf, hi_mask);
    result = _mm256_blendv_pd(result, _mm256_setzero_pd(), lo_mask);
    result = _mm256_blendv_pd(result, x, nan_mask);
    return result;
}

// Inverse normal CDF: central rational on all lanes, per-lane scalar
// fallback for the ~5% of draws landing in the tails.
inline __m256d vnorm_inv(__m256d u)
{
    const __m256d q = _mm256_sub_pd(u, _mm256_set1_pd(0.5));
    const __m256d r = _mm256_mul_pd(q, q);

    __m256d num = _mm256_set1_pd(kNormInvA[0]);
    for (int c = 1; c < 6; ++c)
        num = _mm256_add_pd(_mm256_mul_pd(num, r), _mm256_set1_pd(kNormInvA[c]));
    num = _mm256_mul_pd(num, q);

    __m256d den = _mm256_set1_pd(kNormInvB[0]);
    for (int c = 1; c < 5; ++c)
        den = _mm256_add_pd(_mm256_mul_pd(den, r), _mm256_set1_pd(kNormInvB[c]));
    den = _mm256_add_pd(_mm256_mul_pd(den, r), _mm256_set1_pd(1.0));

    __m256d x = _mm256_div_pd(num, den);

    const __m256d tail_lo = _mm256_cmp_pd(u, _mm256_set1_pd(kNormInvPLow), _CMP_LT_OQ);
    const __m256d tail_hi = _mm256_cmp_pd(u, _mm256_set1_pd(kNormInvPHigh), _CMP_GT_OQ);
    const int tails = _mm256_movemask_pd(_mm256_or_pd(tail_lo, tail_hi));
    if (tails) {
        alignas(32) double ubuf[4];
        alignas(32) double xbuf[4];
        _mm256_store_pd(ubuf, u);
        _mm256_store_pd(xbuf, x);
        for (int lane = 0; lane < 4; ++lane)
            if (tails & (1 << lane))
                xbuf[lane] = norm_inv(ubuf[lane]);
        x = _mm256_load_pd(xbuf);
    }
    return x;
}

} // namespace

void advance_step_avx2(const std::uint64_t* path_seeds, double* y, double* logx,
                       std::size_t n, std::uint64_t draw_base, const StepParams& p)
{
    const std::uint64_t off1 = (draw_base + 1) * kGamma;
    const std::uint64_t off2 = (draw_base + 2) * kGamma;
    const __m256i voff1 = _mm256_set1_epi64x(static_cast<long long>(off1));
    const __m256i voff2 = _mm256_set1_epi64x(static_cast<long long>(off2));

    const __m256d vrho = _mm256_set1_pd(p.rho);
    const __m256d vrho_c = _mm256_set1_pd(p.rho_comp);
    const __m256d vdrift = _mm256_set1_pd(p.drift_dt);
    const __m256d vhalf_dt = _mm256_set1_pd(p.half_dt);
    const __m256d vsqrt_dt = _mm256_set1_pd(p.sqrt_dt);
    const __m256d vdecay = _mm256_set1_pd(p.ou_decay);
    const __m256d vmean = _mm256_set1_pd(p.ou_mean_term);
    const __m256d vsd = _mm256_set1_pd(p.ou_sd);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i seeds =
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(path_seeds + i));
        const __m256i bits1 = mix64_vec(_mm256_add_epi64(seeds, voff1));
        const __m256i bits2 = mix64_vec(_mm256_add_epi64(seeds, voff2));
        const __m256d z1 = vnorm_inv(unit_open(bits1));
        const __m256d z2 = vnorm_inv(unit_open(bits2));

        const __m256d t1 = _mm256_mul_pd(vrho, z1);
        const __m256d t2 = _mm256_mul_pd(vrho_c, z2);
        const __m256d w2 = _mm256_add_pd(t1, t2);

        const __m256d yv = _mm256_loadu_pd(y + i);
        const __m256d sig = vexp(yv);
        const __m256d sig2 = _mm256_mul_pd(sig, sig);
        const __m256d a1 = _mm256_mul_pd(vhalf_dt, sig2);
        const __m256d a2 = _mm256_sub_pd(vdrift, a1);
        const __m256d a3 = _mm256_mul_pd(vsqrt_dt, sig);
        const __m256d a4 = _mm256_mul_pd(a3, z1);
        __m256d lx = _mm256_loadu_pd(logx + i);
        lx = _mm256_add_pd(_mm256_add_pd(lx, a2), a4);
        _mm256_storeu_pd(logx + i, lx);

        const __m256d b1 = _mm256_mul_pd(vdecay, yv);
        const __m256d b2 = _mm256_add_pd(vmean, b1);
        const __m256d b3 = _mm256_mul_pd(vsd, w2);
        _mm256_storeu_pd(y + i, _mm256_add_pd(b2, b3));
    }
    if (i < n)
        advance_step_scalar(path_seeds + i, y + i, logx + i, n - i, draw_base, p);
}

} // namespace rsvol::kernels

#endif // RSVOL_HAVE_AVX2_KERNELS
