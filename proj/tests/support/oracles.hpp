#pragma once

// Test-only oracles, independent of the implementation paths they check.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracles {

// Adaptive Simpson quadrature.
inline double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-13, int depth = 40) {
  if (!(b > a)) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = simpson(a, b, fa, fm, fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Reference single-layer shallow-water solver (Rusanov flux, first order)
// for dam-break comparisons. Flat bed, reflective-free outflow ends.
struct SWRef {
  std::vector<double> H, q;  // depth and discharge per cell
  double dx, g;

  SWRef(int n, double length, double g_) : H(n, 0.0), q(n, 0.0), dx(length / n), g(g_) {}

  void step(double dt) {
    const int n = static_cast<int>(H.size());
    std::vector<double> fH(n + 1), fq(n + 1);
    auto flux = [&](double hl, double ql, double hr, double qr, double& FH, double& FQ) {
      const double ul = hl > 1e-12 ? ql / hl : 0.0;
      const double ur = hr > 1e-12 ? qr / hr : 0.0;
      const double cl = std::sqrt(g * hl), cr = std::sqrt(g * hr);
      const double a = std::max(std::abs(ul) + cl, std::abs(ur) + cr);
      const double FHl = ql, FHr = qr;
      const double FQl = ql * ul + 0.5 * g * hl * hl;
      const double FQr = qr * ur + 0.5 * g * hr * hr;
      FH = 0.5 * (FHl + FHr) - 0.5 * a * (hr - hl);
      FQ = 0.5 * (FQl + FQr) - 0.5 * a * (qr - ql);
    };
    for (int k = 0; k <= n; ++k) {
      const int l = std::max(0, k - 1), r = std::min(n - 1, k);
      flux(H[l], q[l], H[r], q[r], fH[k], fq[k]);
    }
    for (int i = 0; i < n; ++i) {
      H[i] -= dt / dx * (fH[i + 1] - fH[i]);
      q[i] -= dt / dx * (fq[i + 1] - fq[i]);
    }
  }

  double max_speed() const {
    double s = 0.0;
    for (size_t i = 0; i < H.size(); ++i) {
      const double u = H[i] > 1e-12 ? q[i] / H[i] : 0.0;
      s = std::max(s, std::abs(u) + std::sqrt(g * H[i]));
    }
    return s;
  }

  void run_to(double t_end) {
    double t = 0.0;
    while (t < t_end) {
      const double dt = std::min(0.4 * dx / std::max(max_speed(), 1e-9), t_end - t);
      step(dt);
      t += dt;
    }
  }
};

inline std::mt19937_64 rng(uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace oracles
