#include <cmath>
#include <random>

#include "doctest.h"
#include "kakeya/errors.hpp"
#include "kakeya/tangency.hpp"
#include "seed.hpp"

using namespace kakeya;

TEST_CASE("parabola closed form") {
  auto f = preset("parabola");
  auto s = solve_tangency(f, 2.0, 1.0, 0.5);
  CHECK(s.u == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(s.v == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(std::abs(s.residual_c0) <= 1e-15);
  CHECK(std::abs(s.residual_c1) <= 1e-15);
  CHECK(s.f2_eff == doctest::Approx(2.0));

  double a = 1.0 + std::ldexp(1.0, -10);
  auto t = solve_tangency(f, a, 1.0, 0.5);
  CHECK(t.u == doctest::Approx(0.5 * std::ldexp(1.0, -10) / a).epsilon(1e-13));
}

TEST_CASE("equal apertures give the identity") {
  for (auto& n : preset_names()) {
    auto s = solve_tangency(preset(n), 1.3, 1.3, 0.4);
    CHECK(s.u == 0.0);
    CHECK(s.v == 0.0);
    CHECK(verify_dominance(preset(n), 1.3, 1.3, 0.4, s, 1000) == 0.0);
  }
}

TEST_CASE("exponential: u = ln(a / a~), v = 0") {
  auto s = solve_tangency(preset("exponential"), 1.5, 1.0, 0.6);
  CHECK(s.u == doctest::Approx(std::log(1.5)).epsilon(1e-13));
  CHECK(std::abs(s.v) < 1e-14);
}

TEST_CASE("solver errors") {
  auto f = preset("parabola");
  CHECK_THROWS_AS(solve_tangency(f, 1.0, 1.5, 0.5), OrderingError);
  CHECK_THROWS_AS(solve_tangency(f, 1.5, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(solve_tangency(f, 1.5, 1.0, 1.2), DomainError);
  // needs u = ln 2 > x0
  CHECK_THROWS_AS(solve_tangency(preset("exponential"), 2.0, 1.0, 0.3), DomainError);
}

TEST_CASE("random parabola agrees with closed form; u monotone in a") {
  std::mt19937_64 rng(test_seed());
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto f = preset("parabola");
  for (int i = 0; i < 1000; ++i) {
    double at = 1 + U(rng), a = at + (2 - at) * U(rng), x0 = 0.01 + 0.99 * U(rng);
    auto s = solve_tangency(f, a, at, x0);
    double u = x0 * (a - at) / a;
    CHECK(std::abs(s.u - u) <= 1e-12 * std::max(u, 1e-300) + 1e-300);
    double a2 = std::min(2.0, a + 0.1 * U(rng));
    CHECK(solve_tangency(f, a2, at, x0).u >= s.u);
  }
}

TEST_CASE("dominance holds with a zero at x0") {
  auto f = preset("parabola");
  auto s = solve_tangency(f, 2.0, 1.0, 0.5);
  auto rep = dominance_scan(f, 2.0, 1.0, 0.5, s, 10000);
  CHECK(rep.min_gap == doctest::Approx(0.0).epsilon(1e-15).scale(1.0));
  CHECK(rep.argmin == doctest::Approx(0.5));
  auto e = preset("exponential");
  auto t = solve_tangency(e, 1.5, 1.0, 0.6);
  auto r2 = dominance_scan(e, 1.5, 1.0, 0.6, t, 10000);
  CHECK(r2.min_gap >= -1e-9);
  CHECK(std::abs(r2.near_gap) <= 1e-9);
}
