#include <cmath>

#include "doctest.h"
#include "kakeya/errors.hpp"
#include "kakeya/iteration.hpp"

using namespace kakeya;

static IterationPlan iplan(std::vector<int> ms, bool diag = true) {
  IterationPlan p;
  p.family = preset("parabola");
  p.m_sequence = ms;
  p.depth = int(ms.size());
  p.diagnostic = diag;
  return p;
}

TEST_CASE("window start formula") {
  double a2 = 1 - (1 - 4 * std::log2(32.0) / 32) * (1 - 4 * std::log2(64.0) / 64);
  CHECK(iterated_window_start({32, 64}, 2) == doctest::Approx(a2));
  // M_n = 32^n: partial products stay bounded away from 1
  std::vector<int> ms = {32, 1024};
  CHECK(iterated_window_start(ms, 2) < 1.0);
}

TEST_CASE("depth 1 equals the plain stage") {
  auto it = build_iterated(iplan({8}));
  ConstructionPlan p;
  p.family = preset("parabola");
  p.M = 8;
  p.diagnostic = true;
  auto st = build_stage(p);
  REQUIRE(it.rects.size() == st.rects.size());
  for (std::size_t i = 0; i < st.rects.size(); ++i) {
    CHECK(it.rects[i].u == st.rects[i].u);
    CHECK(it.rects[i].aperture == st.rects[i].aperture);
  }
}

TEST_CASE("depth 2 counts, apertures and paths") {
  auto outer = build_iterated(iplan({4}));
  auto it = build_iterated(iplan({4, 6}));
  REQUIRE(it.rects.size() == (1u << 10));
  CHECK(it.depth == 2);
  for (std::size_t n = 0; n < it.rects.size(); ++n) {
    const auto& par = outer.rects[n >> 6];
    const auto& r = it.rects[n];
    CHECK(r.aperture >= par.aperture);
    CHECK(r.aperture + r.thickness <= par.aperture + par.thickness + 1e-15);
    CHECK(r.u >= par.u);
  }
  CHECK(it.parent_path(70) == "1/6");
}

TEST_CASE("budget and level errors") {
  auto p = iplan({16, 16});
  CHECK_THROWS_AS(validate_iteration(p), SizeError);
  auto q = iplan({8, 16}, false);
  CHECK_THROWS_AS(validate_iteration(q), ConfigError);
}

TEST_CASE("nesting") {
  auto outer = build_iterated(iplan({4}));
  auto inner = build_iterated(iplan({4, 6}));
  ExactSlicer o(outer), i(inner);
  auto r = nesting_check(o, i, std::ldexp(1.0, -4), std::ldexp(1.0, -10), 128, 2);
  CHECK(r.contained);
  CHECK(r.worst_violation <= 1e-12);
  auto same = nesting_check(o, o, 1e-3, 1e-3, 64);
  CHECK(same.contained);
  auto over = nesting_check(o, o, 1e-3, 2e-3, 64);
  CHECK_FALSE(over.contained);
  CHECK(over.worst_violation > 0.0);
}

TEST_CASE("virtual depth-2 blocks match the materialized set") {
  auto p = iplan({4, 8});
  auto mat = build_iterated(p);
  ExactSlicer ex(mat);
  auto vb = iterated_blocks(p);
  CHECK(vb.rect_count() == mat.rects.size());
  for (double x : {0.2, 0.5, 0.95})
    CHECK(vb.slice_length(x, 1e-6) == doctest::Approx(ex.slice_length(x, 1e-6)).epsilon(1e-3));
}
