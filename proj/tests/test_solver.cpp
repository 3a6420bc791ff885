#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "raceway/solver.hpp"
#include "support/oracles.hpp"

using namespace raceway;

namespace {

GridSpec flat_grid(double L, int nc, int nl) {
  return build_grid(L, nc, nl, std::vector<double>(nl, 1.0 / nl), nullptr);
}

Solver make_periodic(double L, int nc, int nl, SchemeOptions sc = {},
                     PhysParams ph = {}, WheelConfig wh = {}) {
  sc.bio_reactions = false;
  return Solver(flat_grid(L, nc, nl), ph, wh, BioParams{}, sc, BoundaryCondition{},
                BoundaryCondition{});
}

}  // namespace

TEST_CASE("uniform state on a flat bed is bit-exact steady") {
  for (int order : {1, 2}) {
    SchemeOptions sc;
    sc.order = order;
    Solver s = make_periodic(20.0, 40, 5, sc);
    s.set_uniform(0.5, 0.3, 12.0, 25.0, 5.0, 5.0);
    // stratified scalars: still steady because fluxes match per layer
    for (int a = 0; a < 5; ++a)
      for (int i = 0; i < 40; ++i) s.tracer().at(a, i) = 2.0 + a;
    for (int k = 0; k < 50; ++k) s.step();
    for (int i = 0; i < 40; ++i) {
      CHECK(s.height().at(0, i) == 0.5);
      for (int a = 0; a < 5; ++a) {
        CHECK(s.u().at(a, i) == 0.3);
        CHECK(s.tracer().at(a, i) == 2.0 + a);
        CHECK(s.bio(1).at(a, i) == 25.0);
      }
    }
  }
}

TEST_CASE("lake at rest stays at rest to machine precision") {
  Solver s = make_periodic(20.0, 50, 8);
  s.set_uniform(0.5, 0.0, 4.0, 0.0, 0.0, 0.0);
  for (int k = 0; k < 200; ++k) s.step();
  for (int i = 0; i < 50; ++i) {
    CHECK(s.height().at(0, i) == 0.5);
    for (int a = 0; a < 8; ++a) CHECK(s.u().at(a, i) == 0.0);
  }
}

TEST_CASE("cfl time step") {
  SUBCASE("dry state returns dt_max") {
    SchemeOptions sc;
    sc.dt_max = 0.37;
    Solver s = make_periodic(10.0, 10, 2, sc);
    s.set_uniform(0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    CHECK(s.compute_dt() == 0.37);
  }
  SUBCASE("single layer at rest: dt = 0.9 dx / (sqrt(3) c), c = sqrt(gH/2)") {
    Solver s = make_periodic(10.0, 20, 1);
    s.set_uniform(0.5, 0.0, 4.0, 0.0, 0.0, 0.0);  // T = T0 so rho = rho0
    const double c = std::sqrt(9.81 * 0.5 / 2.0);
    CHECK(s.compute_dt() ==
          doctest::Approx(0.9 * 0.5 / (std::sqrt(3.0) * c)).epsilon(1e-12));
  }
  SUBCASE("doubling dx doubles dt") {
    Solver s1 = make_periodic(10.0, 20, 3);
    Solver s2 = make_periodic(20.0, 20, 3);
    s1.set_uniform(0.5, 0.2, 4.0, 0.0, 0.0, 0.0);
    s2.set_uniform(0.5, 0.2, 4.0, 0.0, 0.0, 0.0);
    CHECK(s2.compute_dt() == doctest::Approx(2.0 * s1.compute_dt()).epsilon(1e-12));
  }
}

TEST_CASE("tracer bump advection: conservation and maximum principle") {
  for (int order : {1, 2}) {
    SchemeOptions sc;
    sc.order = order;
    Solver s = make_periodic(20.0, 100, 3, sc);
    s.set_uniform(0.5, 0.4, 0.0, 1.0, 0.2, 5.0);
    const GridSpec& g = s.grid();
    for (int i = 0; i < 100; ++i) {
      const double x = g.x_center[i];
      const double bump = std::exp(-0.5 * (x - 6.0) * (x - 6.0));
      for (int a = 0; a < 3; ++a) s.tracer().at(a, i) = bump;
    }
    const double mass0 = s.total_tracer_mass();
    const double vol0 = s.total_volume();
    const auto [lo0, hi0] = s.tracer_range();
    for (int k = 0; k < 400; ++k) s.step();
    CHECK(s.total_tracer_mass() == doctest::Approx(mass0).epsilon(1e-12));
    CHECK(s.total_volume() == doctest::Approx(vol0).epsilon(1e-13));
    const auto [lo1, hi1] = s.tracer_range();
    CHECK(lo1 >= lo0 - 1e-12);
    CHECK(hi1 <= hi0 + 1e-12);
    // the bump peak rode along at u = 0.4
    const double x_now = std::fmod(6.0 + 0.4 * s.time(), 20.0);
    const int cell_now = static_cast<int>(x_now / 0.2) % 100;
    CHECK(s.tracer().at(0, cell_now) > 0.25);
    CHECK(s.tracer().at(0, 30) < 0.2);  // and left the start behind
  }
}

TEST_CASE("one transport step matches an independent quadrature-based rebuild") {
  // two layers with shear on a flat periodic bed; the height update and the
  // exchange terms are recomputed in test code with quadrature half-fluxes
  const int nc = 8, nl = 2;
  const double L = 8.0, dxc = 1.0, g = 9.81;
  SchemeOptions sc;
  sc.cfl = 0.5;
  PhysParams ph;
  ph.alpha_T = 0.0;  // uniform density keeps the oracle simple
  Solver s = make_periodic(L, nc, nl, sc, ph);
  std::vector<double> H0(nc), u_bot(nc), u_top(nc);
  for (int i = 0; i < nc; ++i) {
    H0[i] = 1.0 + 0.1 * std::sin(2.0 * M_PI * i / nc);
    u_bot[i] = 0.3 + 0.2 * std::cos(2.0 * M_PI * i / nc);
    u_top[i] = 0.1;
    s.height().at(0, i) = H0[i];
    s.u().at(0, i) = u_bot[i];
    s.u().at(1, i) = u_top[i];
  }
  const double dt = s.compute_dt();
  s.step_with_dt(dt);

  auto halfflux = [&](double h, double u, double c, bool plus) {
    auto M = [&](double xi) {
      const double w = (xi - u) / c;
      return std::abs(w) <= std::sqrt(3.0) ? h / c / (2.0 * std::sqrt(3.0)) : 0.0;
    };
    const double lo = u - std::sqrt(3.0) * c, hi = u + std::sqrt(3.0) * c;
    const double a = plus ? std::max(0.0, lo) : lo;
    const double b = plus ? hi : std::min(0.0, hi);
    if (b <= a) return 0.0;
    return oracles::adaptive_simpson([&](double xi) { return xi * M(xi); }, a, b, 1e-15);
  };
  auto cspeed = [&](int i, int layer) {
    const double h = 0.5 * H0[i];
    const double p =
        layer == 0 ? g * (0.5 * 1000.0 * h + 1000.0 * h) : g * 0.5 * 1000.0 * h;
    return std::sqrt(p / 1000.0);
  };
  std::vector<std::vector<double>> fh(nl, std::vector<double>(nc + 1));
  for (int a = 0; a < nl; ++a) {
    for (int k = 0; k <= nc; ++k) {
      const int il = (k - 1 + nc) % nc, ir = k % nc;
      const double ul = a == 0 ? u_bot[il] : u_top[il];
      const double ur = a == 0 ? u_bot[ir] : u_top[ir];
      fh[a][k] = halfflux(0.5 * H0[il], ul, cspeed(il, a), true) +
                 halfflux(0.5 * H0[ir], ur, cspeed(ir, a), false);
    }
  }
  for (int i = 0; i < nc; ++i) {
    const double Hn =
        H0[i] - dt / dxc * (fh[0][i + 1] - fh[0][i] + fh[1][i + 1] - fh[1][i]);
    CHECK(s.height().at(0, i) == doctest::Approx(Hn).epsilon(1e-9));
    // exchange through the mid interface: share minus transport-only mass
    const double transport_bot = 0.5 * H0[i] - dt / dxc * (fh[0][i + 1] - fh[0][i]);
    const double G_mid = 0.5 * Hn - transport_bot;
    CHECK(s.exchange_mass(1, i) == doctest::Approx(G_mid).epsilon(1e-8));
    CHECK(s.exchange_mass(0, i) == 0.0);
    CHECK(s.exchange_mass(2, i) == 0.0);
    // sign property: positive exchange iff the bottom layer would
    // otherwise fall below its share of the column
    if (std::abs(G_mid) > 1e-12)
      CHECK((s.exchange_mass(1, i) > 0.0) == (0.5 * Hn > transport_bot));
  }
}

TEST_CASE("exchange terms vanish without shear") {
  Solver s = make_periodic(10.0, 16, 4);
  s.set_uniform(0.8, 0.37, 4.0, 0.0, 0.0, 0.0);
  s.step();
  for (int i = 0; i < 16; ++i)
    for (int k = 0; k <= 4; ++k) CHECK(s.exchange_mass(k, i) == 0.0);
}

TEST_CASE("single layer has no interior interfaces") {
  Solver s = make_periodic(10.0, 16, 1);
  s.set_uniform(0.8, 0.3, 4.0, 0.0, 0.0, 0.0);
  s.step();
  for (int i = 0; i < 16; ++i) {
    CHECK(s.exchange_mass(0, i) == 0.0);
    CHECK(s.exchange_mass(1, i) == 0.0);
  }
}

TEST_CASE("dam break against an independent Godunov reference") {
  auto run_ours = [&](int nc) {
    Solver s = make_periodic(100.0, nc, 1);
    s.set_uniform(1.0, 0.0, 4.0, 0.0, 0.0, 0.0);
    for (int i = 0; i < nc; ++i) {
      const double x = s.grid().x_center[i];
      if (x > 25.0 && x < 75.0) s.height().at(0, i) = 2.0;
    }
    while (s.time() < 2.0) s.step(2.0 - s.time());
    return s;
  };
  oracles::SWRef ref(1000, 100.0, 9.81);
  for (int i = 0; i < 1000; ++i) {
    const double x = (i + 0.5) * 0.1;
    ref.H[i] = (x > 25.0 && x < 75.0) ? 2.0 : 1.0;
  }
  ref.run_to(2.0);

  auto l1_err = [&](Solver& s) {
    const int nc = s.grid().n_cells;
    double err = 0.0, norm = 0.0;
    for (int i = 0; i < nc; ++i) {
      const double x = s.grid().x_center[i];
      const int j = std::min(999, static_cast<int>(x / 0.1));
      err += std::abs(s.height().at(0, i) - ref.H[j]) * s.grid().dx[i];
      norm += ref.H[j] * s.grid().dx[i];
    }
    return err / norm;
  };
  Solver s100 = run_ours(100), s200 = run_ours(200);
  const double e100 = l1_err(s100), e200 = l1_err(s200);
  CHECK(e200 < 0.02);  // first-order agreement band
  CHECK(e200 < e100);  // refinement helps
}

TEST_CASE("diffusion and friction step") {
  SUBCASE("mu = kappa = 0 leaves the velocity untouched") {
    Solver s = make_periodic(10.0, 8, 3);
    s.set_uniform(0.5, 0.25, 4.0, 0.0, 0.0, 0.0);
    for (int k = 0; k < 5; ++k) s.step();
    for (int i = 0; i < 8; ++i)
      for (int a = 0; a < 3; ++a) CHECK(s.u().at(a, i) == 0.25);
  }
  SUBCASE("two equal layers with opposite velocities: momentum conserved, shear decays") {
    PhysParams ph;
    ph.mu = 0.01;
    Solver s = make_periodic(10.0, 6, 2, SchemeOptions{}, ph);
    s.set_uniform(1.0, 0.0, 4.0, 0.0, 0.0, 0.0);
    for (int i = 0; i < 6; ++i) {
      s.u().at(0, i) = 1.0;
      s.u().at(1, i) = -1.0;
    }
    double shear_prev = 2.0 + 1e-12;
    for (int k = 0; k < 20; ++k) {
      s.step();
      const double mom = 0.5 * s.u().at(0, 2) + 0.5 * s.u().at(1, 2);
      const double shear = std::abs(s.u().at(0, 2) - s.u().at(1, 2));
      CHECK(mom == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(shear < shear_prev);
      shear_prev = shear;
    }
    // hand tridiagonal solve for the first step
    PhysParams ph2 = ph;
    Solver s2 = make_periodic(10.0, 6, 2, SchemeOptions{}, ph2);
    s2.set_uniform(1.0, 0.0, 4.0, 0.0, 0.0, 0.0);
    for (int i = 0; i < 6; ++i) {
      s2.u().at(0, i) = 1.0;
      s2.u().at(1, i) = -1.0;
    }
    const double dt = s2.compute_dt();
    s2.step_with_dt(dt);
    // symmetric 2x2 system: (h + c) u0 - c u1 = h, -c u0 + (h + c) u1 = -h
    const double h = 0.5, c = dt * 0.01 / 0.5;
    const double expect = h / (h + 2.0 * c);
    CHECK(s2.u().at(0, 3) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(s2.u().at(1, 3) == doctest::Approx(-expect).epsilon(1e-12));
  }
  SUBCASE("pure friction decays the single layer monotonically") {
    PhysParams ph;
    ph.kappa = 0.05;
    Solver s = make_periodic(10.0, 6, 1, SchemeOptions{}, ph);
    s.set_uniform(0.5, 0.8, 4.0, 0.0, 0.0, 0.0);
    double prev = 0.8;
    for (int k = 0; k < 30; ++k) {
      s.step();
      const double u = s.u().at(0, 3);
      CHECK(u < prev);
      CHECK(u > 0.0);
      prev = u;
    }
    Solver s2 = make_periodic(10.0, 6, 1, SchemeOptions{}, ph);
    s2.set_uniform(0.5, 0.8, 4.0, 0.0, 0.0, 0.0);
    const double dt = s2.compute_dt();
    s2.step_with_dt(dt);
    CHECK(s2.u().at(0, 3) ==
          doctest::Approx(0.8 * 0.5 / (0.5 + dt * 0.05)).epsilon(1e-12));
  }
}

TEST_CASE("muscl reconstruction properties") {
  SUBCASE("constant state: second order equals first order") {
    SchemeOptions s1o, s2o;
    s1o.order = 1;
    s2o.order = 2;
    Solver a = make_periodic(10.0, 20, 2, s1o);
    Solver b = make_periodic(10.0, 20, 2, s2o);
    a.set_uniform(0.5, 0.25, 4.0, 1.0, 0.1, 5.0);
    b.set_uniform(0.5, 0.25, 4.0, 1.0, 0.1, 5.0);
    const double dt = std::min(a.compute_dt(), b.compute_dt());
    for (int k = 0; k < 10; ++k) {
      a.step_with_dt(dt);
      b.step_with_dt(dt);
    }
    for (int i = 0; i < 20; ++i) {
      CHECK(a.height().at(0, i) == b.height().at(0, i));
      CHECK(a.u().at(0, i) == b.u().at(0, i));
    }
  }
  SUBCASE("random fields: limiter preserves tracer bounds at order 2") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ur(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
      SchemeOptions sc;
      sc.order = 2;
      Solver s = make_periodic(20.0, 50, 3, sc);
      s.set_uniform(0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
      for (int i = 0; i < 50; ++i) {
        const double x = s.grid().x_center[i];
        s.height().at(0, i) = 0.4 + 0.2 * std::sin(2.0 * M_PI * x / 20.0 + trial);
        for (int a = 0; a < 3; ++a) {
          s.u().at(a, i) = 0.3 * std::cos(2.0 * M_PI * x / 20.0 + 0.7 * a + trial);
          s.tracer().at(a, i) = ur(rng);
          s.bio(1).at(a, i) = 10.0 * ur(rng);
        }
      }
      const auto [lo0, hi0] = s.tracer_range();
      for (int k = 0; k < 60; ++k) s.step();
      const auto [lo1, hi1] = s.tracer_range();
      CHECK(lo1 >= lo0 - 1e-11);
      CHECK(hi1 <= hi0 + 1e-11);
      CHECK(s.min_height() >= 0.0);
      CHECK(s.bio_range(1).first >= -1e-11);
    }
  }
}

TEST_CASE("boundary conditions") {
  SUBCASE("periodic wrap conserves an asymmetric tracer") {
    Solver s = make_periodic(10.0, 20, 2);
    s.set_uniform(0.5, 0.3, 4.0, 0.0, 0.0, 0.0);
    for (int i = 0; i < 20; ++i) s.tracer().at(0, i) = i;
    const double m0 = s.total_tracer_mass();
    for (int k = 0; k < 100; ++k) s.step();
    CHECK(s.total_tracer_mass() == doctest::Approx(m0).epsilon(1e-12));
  }
  SUBCASE("imposed discharge / height pair settles near the target discharge") {
    GridSpec g = flat_grid(10.0, 25, 2);
    BoundaryCondition left, right;
    left.kind = BoundaryCondition::Kind::discharge;
    left.profile.H = 0.5;
    left.profile.q = {0.1, 0.1};  // 0.2 m^2/s total
    left.profile.T = {1.0, 1.0};
    left.profile.c1 = {0.0, 0.0};
    left.profile.c2 = {0.0, 0.0};
    left.profile.c3 = {0.0, 0.0};
    right.kind = BoundaryCondition::Kind::height;
    right.height = 0.5;
    SchemeOptions sc;
    sc.bio_reactions = false;
    Solver s(g, PhysParams{}, WheelConfig{}, BioParams{}, sc, left, right);
    s.set_uniform(0.5, 0.0, 0.0, 0.0, 0.0, 0.0);
    while (s.time() < 120.0) s.step();
    for (int i = 2; i < 23; ++i) {
      const double q = 0.5 * s.height().at(0, i) * (s.u().at(0, i) + s.u().at(1, i));
      CHECK(q == doctest::Approx(0.2).epsilon(0.05));
    }
  }
  SUBCASE("incompatible pair is rejected") {
    GridSpec g = flat_grid(10.0, 8, 1);
    BoundaryCondition left, right;  // periodic + height
    right.kind = BoundaryCondition::Kind::height;
    CHECK_THROWS_AS(Solver(g, PhysParams{}, WheelConfig{}, BioParams{}, SchemeOptions{},
                           left, right),
                    std::invalid_argument);
  }
}

TEST_CASE("oversized forced step fails hard") {
  Solver s = make_periodic(10.0, 10, 1);
  s.set_uniform(0.5, 0.0, 4.0, 0.0, 0.0, 0.0);
  for (int i = 0; i < 10; ++i)
    s.u().at(0, i) = s.grid().x_center[i] < 5.0 ? -3.0 : 3.0;  // diverging at mid
  CHECK_THROWS_AS(s.step_with_dt(5.0), SolverError);
}

TEST_CASE("randomized positivity and maximum principle (mini suite)") {
  std::mt19937_64 rng(4711);
  std::uniform_real_distribution<double> ur(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    SchemeOptions sc;
    sc.order = trial % 2 ? 2 : 1;
    WheelConfig wh;
    if (trial % 3 == 0) {
      wh.enabled = true;
      wh.x_center = 5.0;
      wh.z_center = 0.5;
      wh.radius = 0.4;
      wh.omega = 0.85;
      wh.force_coeff = 5e4;
    }
    Solver s = make_periodic(20.0, 40, 4, sc, PhysParams{}, wh);
    s.set_uniform(0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for (int i = 0; i < 40; ++i) {
      const double x = s.grid().x_center[i];
      s.height().at(0, i) = 0.45 + 0.25 * std::sin(2.0 * M_PI * x / 20.0 + trial);
      for (int a = 0; a < 4; ++a) {
        s.u().at(a, i) = 0.4 * std::sin(4.0 * M_PI * x / 20.0 + a + trial);
        s.tracer().at(a, i) = ur(rng);
        s.bio(1).at(a, i) = 50.0 * ur(rng);
        s.bio(2).at(a, i) = 10.0 * ur(rng);
        s.bio(3).at(a, i) = 5.0 * ur(rng);
      }
    }
    const auto [tlo, thi] = s.tracer_range();
    for (int k = 0; k < 150; ++k) s.step();
    CHECK(s.min_height() >= 0.0);
    for (int j = 1; j <= 3; ++j) CHECK(s.bio_range(j).first >= -1e-12);
    if (!wh.enabled) {
      const auto [lo, hi] = s.tracer_range();
      CHECK(lo >= tlo - 1e-11);
      CHECK(hi <= thi + 1e-11);
    }
  }
}

TEST_CASE("heun average keeps conservation exact") {
  SchemeOptions sc;
  sc.order = 2;
  Solver s = make_periodic(20.0, 60, 3, sc);
  s.set_uniform(0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
  for (int i = 0; i < 60; ++i) {
    const double x = s.grid().x_center[i];
    s.height().at(0, i) = 0.5 + 0.1 * std::sin(2.0 * M_PI * x / 20.0);
    for (int a = 0; a < 3; ++a) {
      s.u().at(a, i) = 0.2 * std::cos(2.0 * M_PI * x / 20.0 + a);
      s.bio(2).at(a, i) = 1.0 + 0.5 * std::sin(4.0 * M_PI * x / 20.0);
      s.bio(3).at(a, i) = 5.0;
    }
  }
  const double v0 = s.total_volume();
  const double n0 = s.total_bio_mass(2) + s.total_bio_mass(3);
  for (int k = 0; k < 300; ++k) s.step();
  CHECK(s.total_volume() == doctest::Approx(v0).epsilon(1e-12));
  CHECK(s.total_bio_mass(2) + s.total_bio_mass(3) == doctest::Approx(n0).epsilon(1e-11));
}

TEST_CASE("nitrogen bookkeeping survives active reactions (R = 0)") {
  GridSpec g = flat_grid(20.0, 30, 5);
  BioParams bp;
  bp.R = 0.0;
  bp.time_offset_days = 0.25;  // daylight
  SchemeOptions sc;
  sc.bio_reactions = true;
  Solver s(g, PhysParams{}, WheelConfig{}, bp, sc, BoundaryCondition{},
           BoundaryCondition{});
  s.set_uniform(0.5, 0.1, 4.0, 25.0, 5.0, 5.0);
  const double n0 = s.total_bio_mass(2) + s.total_bio_mass(3);
  for (int k = 0; k < 200; ++k) s.step();
  CHECK(s.total_bio_mass(2) + s.total_bio_mass(3) == doctest::Approx(n0).epsilon(1e-10));
  // carbon actually grew in the light
  CHECK(s.total_bio_mass(1) > 25.0 * 0.5 * 20.0);
}
