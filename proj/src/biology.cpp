#include "raceway/biology.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace raceway {

void BioParams::validate() const {
  if (!(Q0 > 0.0) || !(Q_l > Q0))
    throw std::invalid_argument("bio: need 0 < Q0 < Q_l");
  if (mu_tilde < 0 || K_iI < 0 || K_sI < 0 || lambda_bar < 0 || K3 < 0 || R < 0 ||
      I0_max < 0 || gamma_star < 0 || k_Istar < 0 || atten_a < 0 || atten_b < 0)
    throw std::invalid_argument("bio: parameters must be >= 0");
}

double gamma_of_Istar(const BioParams& p, double I_star) {
  if (I_star < 0.0) throw std::domain_error("gamma_of_Istar: I_star must be >= 0");
  return p.k_Istar / (I_star + p.k_Istar);
}

double growth_rate(const BioParams& p, double q, double I) {
  if (!(q > 0.0)) throw std::domain_error("growth_rate: quota must be positive");
  const double light = I / (I + p.K_sI + I * I / p.K_iI);
  return p.mu_tilde * light * (1.0 - p.Q0 / q);
}

double uptake_rate(const BioParams& p, double C3, double q) {
  const double reg = 1.0 - q / p.Q_l;
  if (reg <= 0.0) return 0.0;
  return p.lambda_bar * C3 / (C3 + p.K3) * reg;
}

std::array<double, 3> reaction_rates(const BioParams& p, double C1, double C2, double C3,
                                     double I) {
  if (C1 <= 0.0) return {0.0, 0.0, 0.0};
  // Quota floored so the starvation term stays finite if C2 underflows.
  const double q = std::max(C2 / C1, 1e-9);
  const double mu = growth_rate(p, q, I);
  const double lam = uptake_rate(p, C3, q);
  return {(mu - p.R) * C1, lam * C1 - p.R * C2, -lam * C1};
}

void light_column(const BioParams& p, double I0, std::span<const double> C2,
                  std::span<const double> h, std::span<double> I_out) {
  const int N = static_cast<int>(C2.size());
  assert(static_cast<int>(h.size()) == N && static_cast<int>(I_out.size()) == N);
  double psi = 0.0;  // optical depth accumulated from the surface
  for (int a = N - 1; a >= 0; --a) {
    const double k = p.atten_a * p.gamma_star * C2[a] + p.atten_b;
    I_out[a] = I0 * std::exp(-(psi + 0.5 * k * h[a]));
    psi += k * h[a];
  }
}

}  // namespace raceway
