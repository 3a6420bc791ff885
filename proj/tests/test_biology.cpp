#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "raceway/biology.hpp"

using namespace raceway;

TEST_CASE("surface light over the day") {
  BioParams p;  // I0_max = 500
  CHECK(surface_light(p, 0.25) == doctest::Approx(500.0).epsilon(1e-14));  // noon
  CHECK(surface_light(p, 0.75) == 0.0);                                    // night
  CHECK(surface_light(p, 1.0 / 12.0) ==
        doctest::Approx(500.0 * std::sin(M_PI / 6.0)).epsilon(1e-13));  // 250
  CHECK(surface_light(p, 1.25) == doctest::Approx(surface_light(p, 0.25)));  // periodic
}

TEST_CASE("photoacclimation factor") {
  BioParams p;
  p.k_Istar = 80.0;
  CHECK(gamma_of_Istar(p, 0.0) == doctest::Approx(1.0));
  CHECK(gamma_of_Istar(p, 80.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(gamma_of_Istar(p, -1.0), std::domain_error);
}

TEST_CASE("growth rate") {
  BioParams p;
  SUBCASE("subsistence quota stops growth") {
    for (double I : {0.0, 10.0, 500.0}) CHECK(growth_rate(p, p.Q0, I) == 0.0);
  }
  SUBCASE("darkness stops growth") {
    for (double q : {0.06, 0.1, 0.25}) CHECK(growth_rate(p, q, 0.0) == 0.0);
  }
  SUBCASE("reference value at q=0.1, I=500") {
    CHECK(growth_rate(p, 0.1, 500.0) ==
          doctest::Approx(1.7 * (500.0 / (500.0 + 70.0 + 500.0 * 500.0 / 295.0)) * 0.5)
              .epsilon(1e-13));
    CHECK(growth_rate(p, 0.1, 500.0) == doctest::Approx(0.2998).epsilon(1e-3));
  }
  SUBCASE("negative below the subsistence quota") {
    CHECK(growth_rate(p, 0.02, 200.0) < 0.0);
  }
  SUBCASE("bounded by mu_tilde and unimodal with peak at sqrt(KsI KiI)") {
    const double I_opt = std::sqrt(p.K_sI * p.K_iI);
    CHECK(I_opt == doctest::Approx(143.7).epsilon(1e-3));
    double prev = 0.0;
    for (double I = 1.0; I < I_opt; I *= 1.3) {
      const double m = growth_rate(p, 0.2, I);
      CHECK(m > prev);
      CHECK(m <= p.mu_tilde);
      prev = m;
    }
    CHECK(growth_rate(p, 0.2, I_opt) > growth_rate(p, 0.2, 4.0 * I_opt));
  }
  SUBCASE("rejects non-positive quota") {
    CHECK_THROWS_AS(growth_rate(p, 0.0, 100.0), std::domain_error);
  }
}

TEST_CASE("uptake rate") {
  BioParams p;
  CHECK(uptake_rate(p, 0.0, 0.1) == 0.0);
  CHECK(uptake_rate(p, 5.0, p.Q_l) == 0.0);
  CHECK(uptake_rate(p, 5.0, 0.3) == 0.0);  // clipped above Q_l
  CHECK(uptake_rate(p, 5.0, 0.1) ==
        doctest::Approx(0.073 * (5.0 / 5.0012) * 0.6).epsilon(1e-13));
  CHECK(uptake_rate(p, 5.0, 0.1) == doctest::Approx(0.0438).epsilon(2e-3));
  for (double c3 : {0.001, 0.5, 9.0}) CHECK(uptake_rate(p, c3, 0.05) <= p.lambda_bar);
}

TEST_CASE("reaction rates") {
  BioParams p;
  SUBCASE("no biomass, no reaction") {
    const auto r = reaction_rates(p, 0.0, 3.0, 5.0, 200.0);
    CHECK(r[0] == 0.0);
    CHECK(r[1] == 0.0);
    CHECK(r[2] == 0.0);
  }
  SUBCASE("nitrogen bookkeeping: dC2 + dC3 = -R C2") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uc(0.01, 100.0), ui(0.0, 600.0);
    for (int k = 0; k < 100; ++k) {
      const double c1 = uc(rng), c2 = 0.2 * uc(rng), c3 = 0.05 * uc(rng), I = ui(rng);
      const auto r = reaction_rates(p, c1, c2, c3, I);
      CHECK(r[1] + r[2] == doctest::Approx(-p.R * c2).epsilon(1e-12));
    }
  }
  SUBCASE("dark uptake continues while growth stops") {
    const auto r = reaction_rates(p, 10.0, 1.0, 5.0, 0.0);  // q = 0.1 < Q_l, C3 > 0
    CHECK(r[0] == doctest::Approx(-p.R * 10.0));  // only respiration
    CHECK(r[1] > 0.0);
    CHECK(r[2] < 0.0);
  }
}

TEST_CASE("light through the water column") {
  BioParams p;  // gamma_star 0.25, a 16.2, b 0.087
  SUBCASE("transparent water passes light through") {
    BioParams q = p;
    q.atten_b = 0.0;
    std::vector<double> c2(5, 0.0), h(5, 0.1), I(5);
    light_column(q, 321.0, c2, h, I);
    for (double v : I) CHECK(v == doctest::Approx(321.0).epsilon(1e-14));
  }
  SUBCASE("reference attenuation at 0.1 m depth with C2 = 5") {
    // single layer of thickness 0.2 m: midpoint depth 0.1 m
    std::vector<double> c2{5.0}, h{0.2}, I(1);
    light_column(p, 1.0, c2, h, I);
    CHECK(I[0] == doctest::Approx(std::exp(-2.0337)).epsilon(1e-12));
  }
  SUBCASE("half a meter deep the column is nearly dark") {
    std::vector<double> c2{5.0}, h{1.0}, I(1);
    light_column(p, 1.0, c2, h, I);  // midpoint at 0.5 m
    CHECK(I[0] == doctest::Approx(3.8e-5).epsilon(0.05));
  }
  SUBCASE("strictly decreasing with depth, bounded by I0") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uc(0.0, 10.0);
    const int N = 12;
    std::vector<double> c2(N), h(N, 0.5 / N), I(N);
    for (auto& v : c2) v = uc(rng);
    light_column(p, 500.0, c2, h, I);
    for (int a = 0; a < N; ++a) {
      CHECK(I[a] <= 500.0);
      CHECK(I[a] >= 0.0);
      if (a > 0) CHECK(I[a] > I[a - 1]);  // layer 0 is the deepest
    }
  }
}

TEST_CASE("parameter validation") {
  BioParams p;
  p.Q0 = 0.3;  // above Q_l
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = BioParams{};
  p.lambda_bar = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
