#include <cmath>

#include "doctest.h"
#include "kakeya/curve_family.hpp"
#include "kakeya/errors.hpp"

using namespace kakeya;

TEST_CASE("presets evaluate exactly") {
  auto p = preset("parabola");
  CHECK(p.f(0.5) == 0.25);
  CHECK(p.d1(0.5) == 1.0);
  CHECK(p.d2(0.3) == 2.0);
  CHECK(p.d3(0.7) == 0.0);
  auto e = preset("exponential");
  CHECK(e.f(1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(e.d3(1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  auto l = preset("parabola_plus_linear");
  CHECK(l.d1(0.0) == 1.0);
  CHECK(l.f(0.5) == 0.75);
  CHECK_THROWS_AS(preset("circle"), ConfigError);
}

TEST_CASE("preset metadata") {
  auto p = preset("parabola");
  CHECK(p.c2_norm == 2.0);
  CHECK(p.inf_f2 == 2.0);
  CHECK(p.sup_f3 == 0.0);
  auto l = preset("parabola_plus_linear");
  CHECK(l.c2_norm == 3.0);
  auto e = preset("exponential");
  CHECK(e.inf_f2 == doctest::Approx(1.0));
  CHECK(e.sup_f3 == doctest::Approx(std::exp(1.0)));
}

TEST_CASE("every preset validates on 10^4 points") {
  for (auto& n : preset_names()) {
    auto r = validate_family(preset(n), 10000, 1e-12);
    CAPTURE(n);
    CHECK(r.passed);
    CHECK(r.grid_size == 10000);
  }
}

TEST_CASE("validation margins") {
  auto r = validate_family(preset("parabola"), 10000);
  CHECK(r.worst_margins[2] == doctest::Approx(-4.0));
  CHECK(r.cinematic_det_min == doctest::Approx(4.0));
  auto e = validate_family(preset("exponential"), 10000);
  CHECK(e.passed);
  CHECK(std::abs(e.worst_margins[2]) < 1e-12);
  CHECK(std::abs(e.cinematic_det_min) < 1e-12);
}

TEST_CASE("cubic fails: f'' vanishes at 0") {
  auto c = make_family(
      "cubic", [](double t) { return t * t * t; }, [](double t) { return 3 * t * t; },
      [](double t) { return 6 * t; }, [](double) { return 6.0; });
  auto r = validate_family(c, 1000);
  CHECK_FALSE(r.passed);
  CHECK(r.worst_margins[0] == doctest::Approx(0.0));
}

TEST_CASE("non-finite evaluator reports the abscissa") {
  auto s = make_family(
      "sing", [](double t) { return t * t; }, [](double t) { return 2 * t; },
      [](double) { return 2.0; }, [](double t) { return t == 0.0 ? 1.0 / t : 0.0; }, 100);
  auto r = validate_family(s, 100);
  CHECK_FALSE(r.passed);
  CHECK(r.bad_abscissa == 0.0);
  CHECK_FALSE(r.failure.empty());
}

TEST_CASE("negative slope at 0 fails") {
  auto s = make_family(
      "tilt", [](double t) { return t * t - t; }, [](double t) { return 2 * t - 1; },
      [](double) { return 2.0; }, [](double) { return 0.0; });
  CHECK_FALSE(validate_family(s, 100).passed);
}

TEST_CASE("cinematic determinant from partials matches a((f'')^2 - f'f''')") {
  for (auto& n : preset_names()) {
    auto f = preset(n);
    for (double a : {1.0, 1.37, 2.0})
      for (int i = 0; i <= 50; ++i) {
        double t = i / 50.0;
        double closed = a * (f.d2(t) * f.d2(t) - f.d1(t) * f.d3(t));
        double det = cinematic_determinant(f, a, t);
        CHECK(det == doctest::Approx(closed).epsilon(1e-12).scale(1.0));
        CHECK(det >= -1e-12);
      }
  }
}
