#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <vector>

#include "raceway/phys.hpp"

using namespace raceway;

TEST_CASE("equation of state") {
  PhysParams p;  // rho0 = 1000, T0 = 4, alpha_T = 6.63e-6
  CHECK(density_of_tracer(p, 4.0) == doctest::Approx(1000.0).epsilon(1e-15));
  CHECK(density_of_tracer(p, 14.0) == doctest::Approx(999.337).epsilon(1e-12));
  // even around T0
  for (double d : {0.5, 3.0, 11.0})
    CHECK(density_of_tracer(p, 4.0 + d) == doctest::Approx(density_of_tracer(p, 4.0 - d)));
}

TEST_CASE("single-layer hydrostatic column") {
  std::vector<double> rho{1000.0}, h{0.5};
  std::vector<double> pl(1), pi(2);
  pressure_profile(9.81, rho, h, {}, {}, pl, pi);
  CHECK(pl[0] == doctest::Approx(9.81 * 250.0).epsilon(1e-14));  // 2452.5 Pa
  CHECK(pi[1] == 0.0);
  CHECK(pi[0] == doctest::Approx(9.81 * 500.0).epsilon(1e-14));
}

TEST_CASE("homogeneous column gives g rho0 H at the bed and decreases upward") {
  const int N = 7;
  std::vector<double> rho(N, 1000.0), h(N, 0.1);
  std::vector<double> pl(N), pi(N + 1);
  pressure_profile(9.81, rho, h, {}, {}, pl, pi);
  CHECK(pi[0] == doctest::Approx(9.81 * 1000.0 * 0.7).epsilon(1e-13));
  for (int k = 0; k < N; ++k) CHECK(pi[k] > pi[k + 1]);
}

TEST_CASE("constant vertical force shifts the pressures by its integrals") {
  // F_z = c over the whole column: int_z^eta c dz' = c (eta - z), so the
  // interface pressure drops by c (eta - z_k) and the layer pressure by
  // c (eta - zbar_a).
  const double c = 37.0, g = 9.81;
  const int N = 4;
  std::vector<double> rho(N, 1000.0), h(N, 0.25);
  const double eta = 1.0;
  std::vector<double> fz_dbl(N), fz_if(N + 1);
  for (int k = 0; k <= N; ++k) fz_if[k] = c * (eta - 0.25 * k);
  for (int a = 0; a < N; ++a) {
    const double zbar = 0.25 * a + 0.125;
    fz_dbl[a] = h[a] * c * (eta - zbar);
  }
  std::vector<double> pl(N), pi(N + 1), pl0(N), pi0(N + 1);
  pressure_profile(g, rho, h, fz_dbl, fz_if, pl, pi);
  pressure_profile(g, rho, h, {}, {}, pl0, pi0);
  for (int a = 0; a < N; ++a) {
    const double zbar = 0.25 * a + 0.125;
    CHECK(pl[a] == doctest::Approx(pl0[a] - c * (eta - zbar)).epsilon(1e-13));
  }
  for (int k = 0; k <= N; ++k)
    CHECK(pi[k] == doctest::Approx(pi0[k] - c * (eta - 0.25 * k)).epsilon(1e-13));
}

TEST_CASE("dry layer contributes no force term") {
  std::vector<double> rho{1000.0, 1000.0}, h{0.0, 0.5};
  std::vector<double> fz_dbl{123.0, 0.0}, fz_if{0.0, 0.0, 0.0};
  std::vector<double> pl(2), pi(3);
  pressure_profile(9.81, rho, h, fz_dbl, fz_if, pl, pi);
  CHECK(pl[0] == doctest::Approx(9.81 * 1000.0 * 0.5).epsilon(1e-13));  // no 1/h blowup
}

TEST_CASE("vertical velocity reconstruction") {
  SUBCASE("steady uniform flow on a flat bottom gives w = 0") {
    const int N = 3;
    std::vector<double> z{0.0, 0.2, 0.4, 0.6};
    std::vector<double> ddx(N, 0.0), G(N + 1, 0.0), w(N);
    reconstruct_column_w(z, z, ddx, G, 0.1, 1e-8, w);
    for (double v : w) CHECK(v == 0.0);
  }

  SUBCASE("dry layer gets w = 0") {
    std::vector<double> z{0.0, 0.0, 0.4};
    std::vector<double> ddx{5.0, 5.0}, G(3, 0.0), w(2);
    reconstruct_column_w(z, z, ddx, G, 0.1, 1e-8, w);
    CHECK(w[0] == 0.0);
    CHECK(w[1] != 0.0);
  }

  SUBCASE("single layer, steady, uniform discharge over a sloped bed") {
    // z- = z_b(x), z+ = z_b(x) + H, H constant, u = q/H constant:
    // hzbar = H (z_b + H/2); d/dx (hzbar u) = q dz_b/dx; with G = 0,
    // w = q z_b' / H = u z_b' (bed-parallel flow).
    const double H = 0.5, q = 0.4, slope = 0.02, dx = 0.1;
    const double u = q / H;
    auto zz = [&](double zb) {
      const double zp = zb + H;
      return 0.5 * (zp * zp - zb * zb);
    };
    const double ddx_zzu = (zz(slope * dx) * u - zz(-slope * dx) * u) / (2.0 * dx);
    std::vector<double> z{0.0, H};
    std::vector<double> ddx{ddx_zzu}, G(2, 0.0), w(1);
    reconstruct_column_w(z, z, ddx, G, 0.1, 1e-8, w);
    CHECK(w[0] == doctest::Approx(u * slope).epsilon(1e-10));
  }
}
