#include "raceway/wheel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace raceway {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFar = 1e30;  // stands in for an unbounded interval end

double wrap_pi(double a) {
  a = std::fmod(a + std::numbers::pi, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a - std::numbers::pi;
}

// z of the point at angle phi (from downward vertical) and horizontal
// offset dx from the wheel axis: (dx, dz) = r (sin phi, -cos phi).
// Callers keep phi strictly inside (0, pi) or (-pi, 0) so the quotient is
// finite and lands on the correct side.
double z_of_angle(double zc, double dx, double phi) {
  const double z = zc - dx * std::cos(phi) / std::sin(phi);
  return std::clamp(z, -kFar, kFar);
}

}  // namespace

void WheelConfig::validate() const {
  if (!enabled) return;
  if (!(radius > 0.0)) throw std::invalid_argument("wheel: radius must be positive");
  if (omega < 0.0) throw std::invalid_argument("wheel: omega must be >= 0");
  if (force_coeff < 0.0) throw std::invalid_argument("wheel: force_coeff must be >= 0");
  if (n_blades < 1 || n_blades > 16)
    throw std::invalid_argument("wheel: n_blades must be in [1,16]");
  if (!(blade_half_angle > 0.0) || blade_half_angle > std::numbers::pi / n_blades)
    throw std::invalid_argument("wheel: blade_half_angle must lie in (0, pi/n_blades]");
}

double blade_angle(const WheelConfig& w, double t) {
  const double period = kTwoPi / w.n_blades;
  double th = std::fmod(w.theta0 + w.omega * t, period);
  if (th < 0.0) th += period;
  // fmod leaves exactly `period` unreachable, but guard the rounding edge
  if (th >= period) th -= period;
  return th;
}

void WheelSlice::compute(const WheelConfig& w, double x, double t) {
  n_ = 0;
  if (!w.enabled) return;
  const double dx = x - w.x_center;
  const double s2 = w.radius * w.radius - dx * dx;
  if (s2 <= 0.0) return;
  dx_ = dx;
  zc_ = w.z_center;
  coeff_ = w.force_coeff * w.omega * w.omega;
  const double s = std::sqrt(s2);
  const double disc_lo = w.z_center - s, disc_hi = w.z_center + s;

  const double base = blade_angle(w, t);
  for (int k = 0; k < w.n_blades; ++k) {
    const double th = wrap_pi(base + k * kTwoPi / w.n_blades);
    const double c = std::cos(th), si = std::sin(th);
    const double w1 = th - w.blade_half_angle, w2 = th + w.blade_half_angle;

    auto add = [&](double lo, double hi) {
      lo = std::max(lo, disc_lo);
      hi = std::min(hi, disc_hi);
      if (hi > lo && n_ < kMax) p_[n_++] = {lo, hi, c, si};
    };

    if (dx == 0.0) {
      // Directly under/over the axis: phi is exactly 0 below, pi above.
      for (int m = -1; m <= 1; ++m) {
        const double a = m * kTwoPi;
        if (w1 <= a && a <= w2) add(-kFar, w.z_center);
        if (w1 <= a + std::numbers::pi && a + std::numbers::pi <= w2) add(w.z_center, kFar);
      }
      continue;
    }

    // phi(z) is monotone over the half-plane containing dx; intersect the
    // wedge (with 2*pi shifts) with that half's angle range. The tiny inset
    // keeps the arc endpoints off phi = 0/pi where z runs to the correct
    // infinity.
    constexpr double eps_a = 1e-12;
    const double lo_a = (dx > 0.0 ? 0.0 : -std::numbers::pi) + eps_a;
    const double hi_a = (dx > 0.0 ? std::numbers::pi : 0.0) - eps_a;
    for (int m = -1; m <= 1; ++m) {
      const double a1 = std::max(w1 + m * kTwoPi, lo_a);
      const double a2 = std::min(w2 + m * kTwoPi, hi_a);
      if (a2 <= a1) continue;
      double za = z_of_angle(w.z_center, dx, a1);
      double zb = z_of_angle(w.z_center, dx, a2);
      if (za > zb) std::swap(za, zb);
      add(za, zb);
    }
  }
}

double WheelSlice::force_x(double z_lo, double z_hi) const {
  if (n_ == 0 || z_hi <= z_lo) return 0.0;
  double sum = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double a = std::max(p_[i].z_lo, z_lo), b = std::min(p_[i].z_hi, z_hi);
    if (b <= a) continue;
    const double ca = a - zc_, cb = b - zc_;
    const double integral = dx_ * dx_ * (b - a) + (cb * cb * cb - ca * ca * ca) / 3.0;
    sum += p_[i].cos_th * integral;
  }
  return coeff_ * sum;
}

double WheelSlice::fz_double(double z_lo, double z_hi, double eta) const {
  if (n_ == 0 || z_hi <= z_lo) return 0.0;
  auto P = [&](double z) {  // antiderivative of r^2(z)
    const double d = z - zc_;
    return dx_ * dx_ * z + d * d * d / 3.0;
  };
  auto Q = [&](double z) {  // antiderivative of P
    const double d = z - zc_;
    return 0.5 * dx_ * dx_ * z * z + d * d * d * d / 12.0;
  };
  double sum = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double A = p_[i].z_lo, B = std::min(p_[i].z_hi, eta);
    if (B <= A) continue;
    double dbl = 0.0;
    // z below the patch: the inner integral spans the whole patch
    const double len1 = std::min(z_hi, A) - z_lo;
    if (len1 > 0.0) dbl += len1 * (P(B) - P(A));
    // z inside the patch: the inner integral runs z..B
    const double z1 = std::max(z_lo, A), z2 = std::min(z_hi, B);
    if (z2 > z1) dbl += (z2 - z1) * P(B) - (Q(z2) - Q(z1));
    sum += p_[i].sin_th * dbl;
  }
  return coeff_ * sum;
}

double WheelSlice::fz_integral(double z_from, double eta) const {
  if (n_ == 0) return 0.0;
  double sum = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double a = std::max(p_[i].z_lo, z_from), b = std::min(p_[i].z_hi, eta);
    if (b <= a) continue;
    const double ca = a - zc_, cb = b - zc_;
    const double integral = dx_ * dx_ * (b - a) + (cb * cb * cb - ca * ca * ca) / 3.0;
    sum += p_[i].sin_th * integral;
  }
  return coeff_ * sum;
}

std::pair<double, double> wheel_force(const WheelConfig& w, double x, double z, double t) {
  if (!w.enabled) return {0.0, 0.0};
  const double dx = x - w.x_center, dz = z - w.z_center;
  const double r2 = dx * dx + dz * dz;
  if (r2 > w.radius * w.radius) return {0.0, 0.0};
  const double phi = std::atan2(dx, -dz);
  const double base = blade_angle(w, t);
  for (int k = 0; k < w.n_blades; ++k) {
    const double th = wrap_pi(base + k * kTwoPi / w.n_blades);
    if (std::abs(wrap_pi(phi - th)) <= w.blade_half_angle) {
      const double mag = w.force_coeff * r2 * w.omega * w.omega;
      return {mag * std::cos(th), mag * std::sin(th)};
    }
  }
  return {0.0, 0.0};
}

double layer_force_x(const WheelConfig& w, double x, double z_lo, double z_hi, double t) {
  WheelSlice s;
  s.compute(w, x, t);
  return s.force_x(z_lo, z_hi);
}

double layer_force_z_double_integral(const WheelConfig& w, double x, double z_lo,
                                     double z_hi, double eta, double t) {
  WheelSlice s;
  s.compute(w, x, t);
  return s.fz_double(z_lo, z_hi, eta);
}

double interface_force_z_integral(const WheelConfig& w, double x, double z_from, double eta,
                                  double t) {
  WheelSlice s;
  s.compute(w, x, t);
  return s.fz_integral(z_from, eta);
}

double layer_force_x_cellavg(const WheelConfig& w, double x, double dx, double z_lo,
                             double z_hi, double t) {
  if (!w.enabled) return 0.0;
  return (layer_force_x(w, x - 0.5 * dx, z_lo, z_hi, t) +
          4.0 * layer_force_x(w, x, z_lo, z_hi, t) +
          layer_force_x(w, x + 0.5 * dx, z_lo, z_hi, t)) /
         6.0;
}

double layer_force_z_double_integral_cellavg(const WheelConfig& w, double x, double dx,
                                             double z_lo, double z_hi, double eta,
                                             double t) {
  if (!w.enabled) return 0.0;
  return (layer_force_z_double_integral(w, x - 0.5 * dx, z_lo, z_hi, eta, t) +
          4.0 * layer_force_z_double_integral(w, x, z_lo, z_hi, eta, t) +
          layer_force_z_double_integral(w, x + 0.5 * dx, z_lo, z_hi, eta, t)) /
         6.0;
}

double interface_force_z_integral_cellavg(const WheelConfig& w, double x, double dx,
                                          double z_from, double eta, double t) {
  if (!w.enabled) return 0.0;
  return (interface_force_z_integral(w, x - 0.5 * dx, z_from, eta, t) +
          4.0 * interface_force_z_integral(w, x, z_from, eta, t) +
          interface_force_z_integral(w, x + 0.5 * dx, z_from, eta, t)) /
         6.0;
}

}  // namespace raceway
