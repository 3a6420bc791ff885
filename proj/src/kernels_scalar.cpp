#include "kernels_detail.hpp"

namespace raceway::kernels {

void half_fluxes_scalar(int n, const double* h, const double* u, const double* c,
                        double* fph, double* fpq, double* fmh, double* fmq) {
  for (int j = 0; j < n; ++j)
    detail::half_flux_one(h[j], u[j], c[j], fph[j], fpq[j], fmh[j], fmq[j]);
}

}  // namespace raceway::kernels
