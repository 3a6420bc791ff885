#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace raceway {

/// Closed-form steady state of the hydrostatic free-surface Euler system,
///   u(x,z) = alpha beta cos(beta (z - z_b)) / sin(beta H)
/// with w from incompressibility, plus the tracer equilibrium
///   T(x,z) = exp(-(H - (z - z_b))),   dx(uT) + dz(wT) = f T.
///
/// H(x) is recovered from the invariant of the bottom-streamline momentum
/// balance,
///   J(H; x) = g (z_b(x) + H) + (alpha beta)^2 / (2 sin^2(beta H)),
/// which is constant in x along the solution; the root is taken on the
/// branch with dJ/dH > 0, continuous in x and anchored at (x_ref, H_ref).
struct AnalyticCase {
  double alpha = 0.4;  // total discharge, m^2 s^-1
  double beta = 1.5;   // m^-1
  double g = 9.81;
  double H_ref = 0.5;
  double x_ref = 8.0;  // anchor at the bed crest keeps the branch rootable
  std::function<double(double)> z_b;
  std::function<double(double)> dz_b;

  double J_ref() const;

  /// H at one x (root of J(H;x) = J_ref on the dJ/dH > 0 branch).
  /// Throws std::runtime_error when no root exists there.
  double surface_height(double x) const;

  /// dH/dx from implicit differentiation of the invariant.
  double surface_height_slope(double x) const;

  /// (u, w); z must lie within [z_b, z_b + H].
  std::pair<double, double> velocity(double x, double z) const;

  double tracer(double x, double z) const;

  /// Reaction rate f with the tangent-free rewrite
  ///   f = -alpha beta sin(beta (H - (z - z_b))) H' / sin^2(beta H),
  /// finite through beta H = pi/2.
  double reaction(double x, double z) const;

  /// Per-layer discharges int u dz across the column split into the given
  /// fractions; they sum to alpha exactly (antiderivative telescoping).
  std::vector<double> layer_discharges(double x, const std::vector<double>& frac_cum) const;
  /// Per-layer mean of u over each slab (exact integral / thickness).
  std::vector<double> layer_mean_u(double x, const std::vector<double>& frac_cum) const;
  /// Per-layer mean of the tracer over each slab (exact integral).
  std::vector<double> layer_mean_tracer(double x, const std::vector<double>& frac_cum) const;
};

/// Two-Gaussian channel bed of the validation case.
AnalyticCase make_two_bump_case(double alpha = 0.4, double beta = 1.5, double H_ref = 0.5,
                                double x_ref = 8.0);

/// Finite-difference residual norms of the analytic fields, sampled on an
/// nx-by-nz grid. All vanish with the square of the sampling step.
struct ResidualNorms {
  double incompressibility = 0.0;  // dx u + dz w
  double kinematic_bottom = 0.0;   // u z_b' - w at the bed
  double kinematic_surface = 0.0;  // u eta' - w at the surface
  double tracer_equilibrium = 0.0; // dx(uT) + dz(wT) - f T
  double momentum = 0.0;           // u dx u + w dz u + g eta'
};
ResidualNorms residual_check(const AnalyticCase& c, double x_lo, double x_hi, int nx, int nz);

}  // namespace raceway
