#include "kakeya/curve_family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kakeya/errors.hpp"

namespace kakeya {

CurveFamily preset(const std::string& name) {
  CurveFamily c;
  c.name = name;
  if (name == "parabola") {
    c.eval0 = [](double t) { return t * t; };
    c.eval1 = [](double t) { return 2.0 * t; };
    c.eval2 = [](double) { return 2.0; };
    c.eval3 = [](double) { return 0.0; };
    c.c2_norm = 2.0;
    c.inf_f2 = 2.0;
    c.sup_f3 = 0.0;
  } else if (name == "parabola_plus_linear") {
    c.eval0 = [](double t) { return t * t + t; };
    c.eval1 = [](double t) { return 2.0 * t + 1.0; };
    c.eval2 = [](double) { return 2.0; };
    c.eval3 = [](double) { return 0.0; };
    c.c2_norm = 3.0;
    c.inf_f2 = 2.0;
    c.sup_f3 = 0.0;
  } else if (name == "exponential") {
    auto e = [](double t) { return std::exp(t); };
    c.eval0 = e;
    c.eval1 = e;
    c.eval2 = e;
    c.eval3 = e;
    c.c2_norm = std::exp(1.0);
    c.inf_f2 = 1.0;
    c.sup_f3 = std::exp(1.0);
  } else {
    throw ConfigError("unknown family '" + name +
                      "' (expected parabola, parabola_plus_linear, exponential)");
  }
  return c;
}

std::vector<std::string> preset_names() {
  return {"parabola", "parabola_plus_linear", "exponential"};
}

CurveFamily make_family(std::string name, Evaluator f, Evaluator d1,
                        Evaluator d2, Evaluator d3, int grid) {
  if (!f || !d1 || !d2 || !d3)
    throw ConfigError("family '" + name + "' must supply f, f', f'', f'''");
  if (grid < 2) throw ConfigError("metadata grid needs at least 2 points");
  CurveFamily c;
  c.name = std::move(name);
  c.eval0 = std::move(f);
  c.eval1 = std::move(d1);
  c.eval2 = std::move(d2);
  c.eval3 = std::move(d3);
  double c2 = 0.0, inf2 = std::numeric_limits<double>::infinity(), sup3 = 0.0;
  for (int i = 0; i < grid; ++i) {
    double t = double(i) / double(grid - 1);
    double v0 = c.eval0(t), v1 = c.eval1(t), v2 = c.eval2(t), v3 = c.eval3(t);
    c2 = std::max({c2, std::fabs(v0), std::fabs(v1), std::fabs(v2)});
    inf2 = std::min(inf2, v2);
    sup3 = std::max(sup3, std::fabs(v3));
  }
  c.c2_norm = c2;
  c.inf_f2 = inf2;
  c.sup_f3 = sup3;
  return c;
}

ValidationReport validate_family(const CurveFamily& family, int grid_size,
                                 double tol) {
  if (grid_size < 2) throw ConfigError("validation grid_size must be >= 2");
  ValidationReport rep;
  rep.grid_size = grid_size;
  double min_f2 = std::numeric_limits<double>::infinity();
  double max_f3 = 0.0;
  double max_c5 = -std::numeric_limits<double>::infinity();
  double min_det = std::numeric_limits<double>::infinity();

  for (int i = 0; i < grid_size; ++i) {
    double t = double(i) / double(grid_size - 1);
    double v0 = family.f(t), v1 = family.d1(t), v2 = family.d2(t),
           v3 = family.d3(t);
    if (!std::isfinite(v0) || !std::isfinite(v1) || !std::isfinite(v2) ||
        !std::isfinite(v3)) {
      std::ostringstream os;
      os << "non-finite evaluator value at t=" << t;
      rep.passed = false;
      rep.bad_abscissa = t;
      rep.failure = os.str();
      return rep;
    }
    if (i == 0) rep.f1_at_zero = v1;
    min_f2 = std::min(min_f2, v2);
    max_f3 = std::max(max_f3, std::fabs(v3));
    double c5 = v1 * v3 - v2 * v2;
    max_c5 = std::max(max_c5, c5);
    min_det = std::min(min_det, -c5);
  }
  rep.worst_margins = {min_f2, max_f3, max_c5};
  rep.cinematic_det_min = min_det;

  std::ostringstream why;
  if (rep.f1_at_zero < -tol) why << "f'(0) < 0; ";
  if (!(min_f2 > tol)) why << "inf f'' <= 0; ";
  if (!std::isfinite(max_f3)) why << "f''' unbounded; ";
  if (max_c5 > tol) why << "f'f''' - (f'')^2 > 0; ";
  rep.failure = why.str();
  if (!rep.failure.empty()) rep.failure.resize(rep.failure.size() - 2);
  rep.passed = rep.failure.empty();
  return rep;
}

double cinematic_determinant(const CurveFamily& family, double a, double t) {
  // u = a f(t): u_t = a f', u_tt = a f'', u_ttt = a f''', u_a = f,
  // u_at = f', u_att = f''
  double u_tt = a * family.d2(t);
  double u_ttt = a * family.d3(t);
  double u_at = family.d1(t);
  double u_att = family.d2(t);
  return u_tt * u_att - u_at * u_ttt;
}

}  // namespace kakeya
