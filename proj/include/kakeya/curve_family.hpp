#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace kakeya {

using Evaluator = std::function<double(double)>;

// Profile f on [0,1] generating curves y = a f(x), 1 <= a <= 2.
// Immutable once built; safe to share between threads.
struct CurveFamily {
  std::string name;
  Evaluator eval0, eval1, eval2, eval3;  // f, f', f'', f'''
  double c2_norm = 0.0;  // sup of |f|, |f'|, |f''|
  double inf_f2 = 0.0;   // inf f''
  double sup_f3 = 0.0;   // sup |f'''|

  double f(double t) const { return eval0(t); }
  double d1(double t) const { return eval1(t); }
  double d2(double t) const { return eval2(t); }
  double d3(double t) const { return eval3(t); }
};

// "parabola" (t^2), "parabola_plus_linear" (t^2+t), "exponential" (e^t).
CurveFamily preset(const std::string& name);
std::vector<std::string> preset_names();

// User family. All four derivatives must be supplied; the bound metadata is
// sampled on `grid` points of [0,1].
CurveFamily make_family(std::string name, Evaluator f, Evaluator d1,
                        Evaluator d2, Evaluator d3, int grid = 10000);

struct ValidationReport {
  bool passed = false;
  int grid_size = 0;
  // [0] min f'' (needs > tol), [1] max |f'''| (needs finite),
  // [2] max f'f''' - f''^2 (needs <= tol)
  std::array<double, 3> worst_margins{};
  double f1_at_zero = 0.0;  // needs >= -tol
  double cinematic_det_min = 0.0;  // min of (f'')^2 - f'f''' at a = 1
  double bad_abscissa = 0.0;       // set when an evaluator was non-finite
  std::string failure;             // empty when passed
};

ValidationReport validate_family(const CurveFamily& family, int grid_size,
                                 double tol = 1e-12);

// det [[u_tt, u_at], [u_ttt, u_att]] for u_a(t) = a f(t), built from the
// partials (not from the closed form a((f'')^2 - f'f''')).
double cinematic_determinant(const CurveFamily& family, double a, double t);

}  // namespace kakeya
