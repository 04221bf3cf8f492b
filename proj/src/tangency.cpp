#include "kakeya/tangency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kakeya/errors.hpp"
#include "gauss.hpp"

namespace kakeya {

namespace {

std::string fmt_args(double a, double at, double x0) {
  std::ostringstream os;
  os.precision(17);
  os << "(a=" << a << ", a_tilde=" << at << ", x0=" << x0 << ")";
  return os.str();
}

}  // namespace

TangencySolution solve_tangency(const CurveFamily& fam, double a,
                                double a_tilde, double x0) {
  if (!(a >= a_tilde))
    throw OrderingError("a < a_tilde " + fmt_args(a, a_tilde, x0));
  if (!(x0 > 0.0 && x0 <= 1.0))
    throw DomainError("tangency abscissa outside (0,1] " + fmt_args(a, a_tilde, x0));

  TangencySolution s;
  // exact for a_tilde <= a <= 2 a_tilde (Sterbenz)
  const double d = a - a_tilde;
  const double f1 = fam.d1(x0);
  if (d == 0.0) {
    s.f2_eff = fam.d2(x0);
    return s;
  }

  // The derivative equation is written as a [f'(x0) - f'(x0-u)] = d f'(x0)
  // with the bracket holding the mean of f'' on [x0-u, x0], which avoids the
  // cancellation of a f'(x0-u) - a_tilde f'(x0) when d is ~2^-M.
  auto f2 = [&](double t) { return fam.d2(t); };
  auto phi = [&](double u) {
    if (u == 0.0) return -d * f1;
    return a * u * detail::mean_over(f2, x0, u) - d * f1;
  };
  const double scale = std::max(std::fabs(d * f1), std::numeric_limits<double>::min());
  const double tol = 1e-14 * scale;

  double lo = 0.0, hi = 2.0 * d * fam.c2_norm / fam.inf_f2;
  bool clamped = false;
  if (hi > x0) {
    hi = x0;
    clamped = true;
  }
  double phi_hi = phi(hi);
  if (phi_hi < 0.0) {
    if (clamped)
      throw DomainError("tangency needs x0 - u < 0 " + fmt_args(a, a_tilde, x0));
    throw SolverError("no sign change in bracket " + fmt_args(a, a_tilde, x0));
  }

  double u = d * f1 / (a * fam.inf_f2);
  if (!(u > lo && u < hi)) u = 0.5 * (lo + hi);
  bool ok = false;
  int it = 0;
  for (; it < 100; ++it) {
    double p = phi(u);
    if (std::fabs(p) <= tol) {
      ok = true;
      break;
    }
    if (p < 0.0) lo = u; else hi = u;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      ok = true;
      break;
    }
    double dp = a * fam.d2(x0 - u);
    double un = u - p / dp;
    if (!(un > lo && un < hi)) un = 0.5 * (lo + hi);
    u = un;
  }
  if (!ok) throw SolverError("no convergence in 100 iterations " + fmt_args(a, a_tilde, x0));
  if (x0 - u < 0.0)
    throw DomainError("tangency needs x0 - u < 0 " + fmt_args(a, a_tilde, x0));

  auto f1e = [&](double t) { return fam.d1(t); };
  s.u = u;
  s.v = (u > 0.0) ? a * u * detail::mean_over(f1e, x0, u) - d * fam.f(x0) : -d * fam.f(x0);
  s.f2_eff = (u > 0.0) ? d * f1 / (a * u) : fam.d2(x0);
  s.residual_c0 = a * fam.f(x0 - u) + s.v - a_tilde * fam.f(x0);
  s.residual_c1 = a * fam.d1(x0 - u) - a_tilde * f1;
  s.iterations = it;
  return s;
}

DominanceReport dominance_scan(const CurveFamily& fam, double a, double a_tilde,
                               double x0, const TangencySolution& sol,
                               int grid_size, double near_radius) {
  DominanceReport r;
  r.min_gap = std::numeric_limits<double>::infinity();
  r.near_gap = std::numeric_limits<double>::infinity();
  auto visit = [&](double x) {
    double y = x - sol.u;
    if (y < 0.0 || y > 1.0) return;
    double g = a * fam.f(y) + sol.v - a_tilde * fam.f(x);
    if (g < r.min_gap) {
      r.min_gap = g;
      r.argmin = x;
    }
    if (std::fabs(x - x0) <= near_radius) r.near_gap = std::min(r.near_gap, std::fabs(g));
  };
  for (int i = 0; i < grid_size; ++i)
    visit(grid_size == 1 ? 0.0 : double(i) / double(grid_size - 1));
  visit(x0);
  return r;
}

double verify_dominance(const CurveFamily& fam, double a, double a_tilde,
                        double x0, const TangencySolution& sol, int grid_size) {
  return dominance_scan(fam, a, a_tilde, x0, sol, grid_size).min_gap;
}

}  // namespace kakeya
