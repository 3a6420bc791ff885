#include "raceway/phys.hpp"

#include <cassert>
#include <stdexcept>

namespace raceway {

void PhysParams::validate() const {
  if (!(g > 0.0)) throw std::invalid_argument("physics: g must be positive");
  if (!(rho0 > 0.0)) throw std::invalid_argument("physics: rho0 must be positive");
  if (mu < 0.0 || kappa < 0.0 || mu_T < 0.0 || mu_C < 0.0)
    throw std::invalid_argument("physics: transport coefficients must be >= 0");
  if (alpha_T < 0.0) throw std::invalid_argument("physics: alpha_T must be >= 0");
}

void pressure_profile(double g, std::span<const double> rho, std::span<const double> h,
                      std::span<const double> fz_layer_dbl,
                      std::span<const double> fz_iface_int,
                      std::span<double> p_layer, std::span<double> p_iface) {
  const int N = static_cast<int>(h.size());
  assert(static_cast<int>(rho.size()) == N);
  assert(static_cast<int>(p_layer.size()) == N);
  assert(static_cast<int>(p_iface.size()) == N + 1);
  const bool forced = !fz_layer_dbl.empty();

  double above = 0.0;  // g * sum of rho_j h_j for layers above the cursor
  p_iface[N] = 0.0;    // free surface, p^a = 0
  for (int a = N - 1; a >= 0; --a) {
    double pl = g * (0.5 * rho[a] * h[a]) + above;
    if (forced && h[a] > 0.0) pl -= fz_layer_dbl[a] / h[a];
    p_layer[a] = pl;
    above += g * rho[a] * h[a];
    p_iface[a] = above;
    if (forced) p_iface[a] -= fz_iface_int[a];
  }
}

void reconstruct_column_w(std::span<const double> z_prev, std::span<const double> z_now,
                          std::span<const double> ddx_zzu, std::span<const double> G,
                          double dt, double dry_h, std::span<double> w) {
  const int N = static_cast<int>(w.size());
  assert(static_cast<int>(z_prev.size()) == N + 1);
  assert(static_cast<int>(z_now.size()) == N + 1);
  assert(static_cast<int>(G.size()) == N + 1);
  for (int a = 0; a < N; ++a) {
    const double h = z_now[a + 1] - z_now[a];
    if (h <= dry_h) {
      w[a] = 0.0;
      continue;
    }
    const double zz_now = 0.5 * (z_now[a + 1] * z_now[a + 1] - z_now[a] * z_now[a]);
    const double zz_prev = 0.5 * (z_prev[a + 1] * z_prev[a + 1] - z_prev[a] * z_prev[a]);
    const double dt_term = (zz_now - zz_prev) / dt;
    w[a] = (dt_term + ddx_zzu[a] - z_now[a + 1] * G[a + 1] + z_now[a] * G[a]) / h;
  }
}

}  // namespace raceway
