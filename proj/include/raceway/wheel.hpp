#pragma once

#include <utility>

namespace raceway {

/// Paddlewheel modelled as a rotating volumic force
///   F = force_coeff * (r * omega)^2 * (cos th, sin th)
/// applied inside the wheel disc on an angular window of half-width
/// blade_half_angle around each blade. th is the blade angle measured from
/// the downward vertical (th = 0: blade dipping straight down, force purely
/// horizontal); omega = d th / dt.
struct WheelConfig {
  bool enabled = false;
  double x_center = 5.0;          // m
  double z_center = 0.5;          // m
  double radius = 0.45;           // m
  double omega = 0.85;            // rad s^-1
  // Calibrated so omega = 0.85 rad/s drives a 0.48 m/s far-field mean on
  // the 100x10 reference pond (mu = 1e-3, kappa = 1e-2).
  double force_coeff = 3.0e4;     // N m^-3 per (m/s)^2
  double blade_half_angle = 0.3;  // rad
  double theta0 = 0.0;            // rad
  int n_blades = 1;

  void validate() const;
};

/// Base blade angle at time t, reduced modulo the blade period 2*pi/n_blades.
double blade_angle(const WheelConfig& w, double t);

/// Active-support geometry of one vertical slice (fixed x, t): the z
/// intervals covered by blade sectors with their force directions. All
/// layer integrals at this x reuse the same slice.
class WheelSlice {
 public:
  void compute(const WheelConfig& w, double x, double t);
  bool empty() const { return n_ == 0; }
  /// int F_x dz over [z_lo, z_hi]
  double force_x(double z_lo, double z_hi) const;
  /// int_{z_lo}^{z_hi} int_z^eta F_z dz' dz
  double fz_double(double z_lo, double z_hi, double eta) const;
  /// int_{z_from}^{eta} F_z dz
  double fz_integral(double z_from, double eta) const;

 private:
  struct Patch {
    double z_lo, z_hi, cos_th, sin_th;
  };
  static constexpr int kMax = 32;
  Patch p_[kMax];
  int n_ = 0;
  double dx_ = 0.0, zc_ = 0.0, coeff_ = 0.0;  // coeff = force_coeff * omega^2
};

/// Point force (F_x, F_z); zero outside the active support.
std::pair<double, double> wheel_force(const WheelConfig& w, double x, double z, double t);

/// Exact z-integral of F_x over [z_lo, z_hi] at horizontal position x.
double layer_force_x(const WheelConfig& w, double x, double z_lo, double z_hi, double t);

/// Same, averaged over a cell [x - dx/2, x + dx/2] with 3-point Simpson.
double layer_force_x_cellavg(const WheelConfig& w, double x, double dx, double z_lo,
                             double z_hi, double t);

/// Exact nested integral  int_{z_lo}^{z_hi} int_z^eta F_z dz' dz  at x.
double layer_force_z_double_integral(const WheelConfig& w, double x, double z_lo,
                                     double z_hi, double eta, double t);
double layer_force_z_double_integral_cellavg(const WheelConfig& w, double x, double dx,
                                             double z_lo, double z_hi, double eta, double t);

/// Exact  int_{z_from}^{eta} F_z dz  at x.
double interface_force_z_integral(const WheelConfig& w, double x, double z_from, double eta,
                                  double t);
double interface_force_z_integral_cellavg(const WheelConfig& w, double x, double dx,
                                          double z_from, double eta, double t);

}  // namespace raceway
