#pragma once

#include "kakeya/curve_family.hpp"

namespace kakeya {

// Translation (u, v) that makes a f(x - u) + v tangent to a_tilde f(x) at x0.
struct TangencySolution {
  double u = 0.0;
  double v = 0.0;
  double f2_eff = 0.0;      // (f'(x0) - f'(x0 - u)) / u ; f''(x0) when u = 0
  double residual_c0 = 0.0; // a f(x0-u) + v - a_tilde f(x0)
  double residual_c1 = 0.0; // a f'(x0-u) - a_tilde f'(x0)
  int iterations = 0;
};

// Solves a f'(x0 - u) = a_tilde f'(x0), then v from the value equation.
// Throws OrderingError (a < a_tilde), DomainError (root needs x0 - u < 0),
// SolverError (no sign change / no convergence).
TangencySolution solve_tangency(const CurveFamily& family, double a,
                                double a_tilde, double x0);

struct DominanceReport {
  double min_gap = 0.0;   // over the grid (plus x0 itself)
  double argmin = 0.0;
  double near_gap = 0.0;  // smallest |gap| within near_radius of x0
};

// Scans gap(x) = a f(x-u) + v - a_tilde f(x) over a uniform grid of [0,1]
// restricted to x - u in [0,1]. The tangency abscissa is always sampled.
DominanceReport dominance_scan(const CurveFamily& family, double a,
                               double a_tilde, double x0,
                               const TangencySolution& sol, int grid_size,
                               double near_radius = 2e-3);

// Minimum gap only.
double verify_dominance(const CurveFamily& family, double a, double a_tilde,
                        double x0, const TangencySolution& sol, int grid_size);

}  // namespace kakeya
