#include "raceway/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace raceway {

namespace {

// J(H) - g z_b, the part depending on H only.
double phi(double g, double D, double beta, double H) {
  const double s = std::sin(beta * H);
  return g * H + D / (2.0 * s * s);
}

double dphi(double g, double D, double beta, double H) {
  const double s = std::sin(beta * H);
  return g - D * beta * std::cos(beta * H) / (s * s * s);
}

}  // namespace

double AnalyticCase::J_ref() const {
  const double D = alpha * alpha * beta * beta;
  return g * z_b(x_ref) + phi(g, D, beta, H_ref);
}

double AnalyticCase::surface_height(double x) const {
  const double D = alpha * alpha * beta * beta;
  const double target = J_ref() - g * z_b(x);

  // Critical height: unique root of dphi on (0, pi/(2 beta)); the solution
  // branch lives above it, where phi is strictly increasing.
  double lo = 1e-12, hi = 0.5 * std::numbers::pi / beta - 1e-12;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (dphi(g, D, beta, mid) < 0.0 ? lo : hi) = mid;
  }
  const double H_crit = 0.5 * (lo + hi);
  if (phi(g, D, beta, H_crit) > target)
    throw std::runtime_error("analytic case breaks down (flow chokes) at x = " +
                             std::to_string(x) + "; no height on the subcritical branch");

  double a = H_crit, b = std::max(2.0 * H_ref, H_crit * 2.0);
  while (phi(g, D, beta, b) < target) {
    b *= 1.5;
    if (beta * b >= std::numbers::pi)
      throw std::runtime_error("analytic case: beta H reached pi while bracketing at x = " +
                               std::to_string(x));
  }
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (a + b);
    (phi(g, D, beta, mid) < target ? a : b) = mid;
  }
  return 0.5 * (a + b);
}

double AnalyticCase::surface_height_slope(double x) const {
  const double D = alpha * alpha * beta * beta;
  const double H = surface_height(x);
  return -g * dz_b(x) / dphi(g, D, beta, H);
}

std::pair<double, double> AnalyticCase::velocity(double x, double z) const {
  const double zb = z_b(x);
  const double H = surface_height(x);
  if (z < zb - 1e-12 || z > zb + H + 1e-12)
    throw std::domain_error("analytic velocity: z outside the water column");
  const double s = std::sin(beta * H);
  const double C = std::cos(beta * (z - zb));
  const double S = std::sin(beta * (z - zb));
  const double u = alpha * beta * C / s;
  const double w = alpha * beta / (s * s) *
                   (S * std::cos(beta * H) * surface_height_slope(x) + C * s * dz_b(x));
  return {u, w};
}

double AnalyticCase::tracer(double x, double z) const {
  const double zb = z_b(x);
  const double H = surface_height(x);
  return std::exp(-(H - (z - zb)));
}

double AnalyticCase::reaction(double x, double z) const {
  const double zb = z_b(x);
  const double H = surface_height(x);
  const double s = std::sin(beta * H);
  return -alpha * beta * std::sin(beta * (H - (z - zb))) * surface_height_slope(x) / (s * s);
}

std::vector<double> AnalyticCase::layer_discharges(double x,
                                                   const std::vector<double>& frac_cum) const {
  const double H = surface_height(x);
  const double s = std::sin(beta * H);
  const int N = static_cast<int>(frac_cum.size()) - 1;
  std::vector<double> q(N);
  for (int a = 0; a < N; ++a)
    q[a] = alpha * (std::sin(beta * frac_cum[a + 1] * H) - std::sin(beta * frac_cum[a] * H)) / s;
  return q;
}

std::vector<double> AnalyticCase::layer_mean_u(double x,
                                               const std::vector<double>& frac_cum) const {
  const double H = surface_height(x);
  auto q = layer_discharges(x, frac_cum);
  for (size_t a = 0; a + 1 < frac_cum.size(); ++a)
    q[a] /= (frac_cum[a + 1] - frac_cum[a]) * H;
  return q;
}

std::vector<double> AnalyticCase::layer_mean_tracer(double x,
                                                    const std::vector<double>& frac_cum) const {
  const double H = surface_height(x);
  const int N = static_cast<int>(frac_cum.size()) - 1;
  std::vector<double> T(N);
  for (int a = 0; a < N; ++a) {
    const double lo = frac_cum[a] * H, hi = frac_cum[a + 1] * H;  // heights above bed
    // integral of exp(-(H - s)) ds over the slab
    T[a] = (std::exp(hi - H) - std::exp(lo - H)) / (hi - lo);
  }
  return T;
}

AnalyticCase make_two_bump_case(double alpha, double beta, double H_ref, double x_ref) {
  AnalyticCase c;
  c.alpha = alpha;
  c.beta = beta;
  c.H_ref = H_ref;
  c.x_ref = x_ref;
  c.z_b = [](double x) {
    const double d1 = x - 8.0, d2 = x - 12.0;
    return 0.2 * std::exp(-d1 * d1) - 0.4 * std::exp(-d2 * d2);
  };
  c.dz_b = [](double x) {
    const double d1 = x - 8.0, d2 = x - 12.0;
    return -2.0 * d1 * 0.2 * std::exp(-d1 * d1) + 2.0 * d2 * 0.4 * std::exp(-d2 * d2);
  };
  return c;
}

ResidualNorms residual_check(const AnalyticCase& c, double x_lo, double x_hi, int nx, int nz) {
  const double hx = (x_hi - x_lo) / nx;
  ResidualNorms out;
  double n_pts = 0.0, n_srf = 0.0;

  auto sq = [](double v) { return v * v; };

  for (int i = 0; i < nx; ++i) {
    const double x = x_lo + (i + 0.5) * hx;
    const double zb = c.z_b(x);
    const double H = c.surface_height(x);
    const double hz = H / nz;

    // surface/bottom kinematic conditions (centered slope of eta and z_b)
    const double etap = (c.z_b(x + hx) + c.surface_height(x + hx) -
                         c.z_b(x - hx) - c.surface_height(x - hx)) /
                        (2.0 * hx);
    const double zbp = (c.z_b(x + hx) - c.z_b(x - hx)) / (2.0 * hx);
    const auto [us, ws] = c.velocity(x, zb + H);
    const auto [ub, wb] = c.velocity(x, zb);
    out.kinematic_surface += sq(us * etap - ws);
    out.kinematic_bottom += sq(ub * zbp - wb);
    n_srf += 1.0;

    // interior residuals at fixed z; margins keep the x-stencil wet
    for (int k = 0; k < nz; ++k) {
      const double frac = 0.15 + 0.7 * (k + 0.5) / nz;
      const double z = zb + frac * H;
      const auto [u0, w0] = c.velocity(x, z);
      const auto [ue, we] = c.velocity(x + hx, z);
      const auto [uw, ww] = c.velocity(x - hx, z);
      const auto [un, wn] = c.velocity(x, z + hz);
      const auto [uso, wso] = c.velocity(x, z - hz);

      out.incompressibility += sq((ue - uw) / (2.0 * hx) + (wn - wso) / (2.0 * hz));
      out.momentum +=
          sq(u0 * (ue - uw) / (2.0 * hx) + w0 * (un - uso) / (2.0 * hz) + c.g * etap);

      const double T0 = c.tracer(x, z);
      out.tracer_equilibrium +=
          sq((ue * c.tracer(x + hx, z) - uw * c.tracer(x - hx, z)) / (2.0 * hx) +
             (wn * c.tracer(x, z + hz) - wso * c.tracer(x, z - hz)) / (2.0 * hz) -
             c.reaction(x, z) * T0);
      n_pts += 1.0;
    }
  }

  out.incompressibility = std::sqrt(out.incompressibility / n_pts);
  out.momentum = std::sqrt(out.momentum / n_pts);
  out.tracer_equilibrium = std::sqrt(out.tracer_equilibrium / n_pts);
  out.kinematic_surface = std::sqrt(out.kinematic_surface / n_srf);
  out.kinematic_bottom = std::sqrt(out.kinematic_bottom / n_srf);
  return out;
}

}  // namespace raceway
