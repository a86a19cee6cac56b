#include "rsvol/kernels/path_step.hpp"

#include <string>

#include "rsvol/errors.hpp"

namespace rsvol::kernels {

const char* lane_name(Lane lane)
{
    switch (lane) {
    case Lane::Auto: return "auto";
    case Lane::Scalar: return "scalar";
    case Lane::Avx2: return "avx2";
    }
    return "?";
}

Lane lane_from_string(const char* name)
{
    const std::string s = name ? name : "";
    if (s == "auto")
        return Lane::Auto;
    if (s == "scalar")
        return Lane::Scalar;
    if (s == "avx2")
        return Lane::Avx2;
    throw DataError("unknown SIMD lane '" + s + "' (use auto|scalar|avx2)");
}

bool cpu_has_avx2()
{
#if RSVOL_HAVE_AVX2_KERNELS
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

Lane resolve_lane(Lane requested)
{
    switch (requested) {
    case Lane::Auto:
        return cpu_has_avx2() ? Lane::Avx2 : Lane::Scalar;
    case Lane::Scalar:
        return Lane::Scalar;
    case Lane::Avx2:
        if (!cpu_has_avx2())
            throw DomainError("avx2 lane requested but this CPU lacks AVX2");
        return Lane::Avx2;
    }
    return Lane::Scalar;
}

StepFn step_fn_for(Lane resolved)
{
#if RSVOL_HAVE_AVX2_KERNELS
    if (resolved == Lane::Avx2)
        return &advance_step_avx2;
#endif
    return &advance_step_scalar;
}

} // namespace rsvol::kernels
