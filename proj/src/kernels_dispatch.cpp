#include "raceway/kernels.hpp"

namespace raceway::kernels {

bool cpu_has_avx2() {
#ifdef __x86_64__
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

HalfFluxFn select_half_flux_kernel(bool force_scalar) {
  if (!force_scalar && cpu_has_avx2()) return &half_fluxes_avx2;
  return &half_fluxes_scalar;
}

const char* half_flux_kernel_name(HalfFluxFn fn) {
  return fn == &half_fluxes_avx2 ? "avx2" : "scalar";
}

}  // namespace raceway::kernels
