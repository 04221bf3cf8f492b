#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kakeya/curve_family.hpp"
#include "kakeya/measure.hpp"

namespace kakeya {

enum class WitnessKind { ball, box, slab_S, rect_T, stage };

std::string to_string(WitnessKind k);
WitnessKind witness_kind(const std::string& name);

// Indicator input for the averaging operator
//   R_delta g(a) = sup_x (2 delta)^-1 int_0^1 int_-delta^delta
//                  g(x1 + t, x2 + a f(t) + s) ds dt.
struct WitnessSet {
  WitnessKind kind = WitnessKind::ball;
  CurveFamily family;              // curves the operator averages over
  double delta = 0.0;              // slab / rect size, stage thickening
  Interval box_x{0, 1}, box_y{0, 1};
  const SliceSource* stage = nullptr;  // not owned

  static WitnessSet ball(const CurveFamily& f);
  static WitnessSet box(const CurveFamily& f, Interval x, Interval y);
  // {(x, b f(x)) : x in [0,1], b in [1, 1+delta]}
  static WitnessSet slab(const CurveFamily& f, double delta);
  // sqrt(delta) x delta rectangle along the tangent of f at 0:
  // {0 <= x <= sqrt(delta), |y - f(0) - f'(0) x| <= delta/2}
  static WitnessSet rect(const CurveFamily& f, double delta);
  static WitnessSet stage_set(const SliceSource& s, double delta);

  // Exact when hint is null and the set allows it; with a stage hint only
  // the hinted rect is consulted when full membership is unavailable.
  bool contains(double X, double Y, const CurvedRect* hint = nullptr) const;
  double measure(int columns = 4096, int threads = 1) const;
  // (x-range, y-range) covering the set
  std::pair<Interval, Interval> bounding_box() const;
};

struct Translation {
  double x1 = 0.0, x2 = 0.0;
};

struct SearchMode {
  enum Kind { witness, grid, fixed } kind = witness;
  int nx = 64, ny = 64;  // grid mode
  Translation fixed_at;   // fixed mode

  static SearchMode with_witness() { return {}; }
  static SearchMode on_grid(int nx, int ny) {
    SearchMode m;
    m.kind = grid;
    m.nx = nx;
    m.ny = ny;
    return m;
  }
  static SearchMode at(double x1, double x2) {
    SearchMode m;
    m.kind = fixed;
    m.fixed_at = {x1, x2};
    return m;
  }
};

struct Quadrature {
  int t_nodes = 512;
  int s_nodes = 16;
};

// The translation realizing the witness for aperture a, plus the rect used as
// a membership hint for stages.
std::optional<Translation> witness_translation(const WitnessSet& set, double a,
                                               std::optional<CurvedRect>* hint = nullptr);

// Value in [0,1]: mean of the indicator over t x s midpoint nodes, maximized
// over the searched translations. Grid mode also includes the witness
// translation when one exists, evaluated without hints.
double r_delta_indicator(const WitnessSet& set, double a, double delta,
                         const SearchMode& mode = {}, const Quadrature& quad = {});

struct MaximalEstimate {
  std::vector<double> a_grid;
  std::vector<double> values;
  double p = 0.0, q = 0.0;
  double measure = 0.0;
  double ratio_lower_bound = 0.0;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// ||R_delta 1_E||_{L^q([1,2])} (trapezoid on a_grid) / |E|^(1/p).
// `set_measure` < 0 means compute it.
MaximalEstimate ratio_lower_bound(const WitnessSet& set, double delta, double p,
                                  double q, const std::vector<double>& a_grid,
                                  const SearchMode& mode = {},
                                  const Quadrature& quad = {}, int threads = 1,
                                  double set_measure = -1.0);

// ||values||_q over a_grid (trapezoid, max for q = inf) / measure^(1/p)
double lq_ratio(const std::vector<double>& a_grid, const std::vector<double>& values,
                double measure, double p, double q);

std::vector<double> uniform_grid(double lo, double hi, int n);
std::vector<double> geometric_deltas(int k_from, int k_to);  // 2^-k_from .. 2^-k_to

struct ExponentFit {
  std::vector<double> deltas;
  std::vector<double> ratios;
  double slope = 0.0;
  double intercept = 0.0;
};

// Least-squares slope of log ratio against log delta for a witness kind
// (ball, slab_S, rect_T) built at each delta.
ExponentFit exponent_fit(WitnessKind kind, const CurveFamily& family, double p,
                         double q, const std::vector<double>& deltas,
                         int a_points = 33, const Quadrature& quad = {},
                         int threads = 1);

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y,
                           double* intercept = nullptr);

// Vertices of the (1/p, 1/q) diagram.
struct DiagramPoint {
  double inv_p, inv_q;
};
const std::map<char, DiagramPoint>& diagram_points();

// Region of (1/p, 1/q) in the lower-bound table and the exponent e with
// ratio ~ delta^e there ("log" regions report e = 0 with log_power set).
struct RegionBound {
  std::string region;
  double exponent = 0.0;
  double log_power = 0.0;  // power of log(1/delta)
};
RegionBound region_bound(double inv_p, double inv_q);

}  // namespace kakeya
