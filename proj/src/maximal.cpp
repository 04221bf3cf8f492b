#include "kakeya/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gauss.hpp"
#include "kakeya/errors.hpp"
#include "parallel.hpp"

namespace kakeya {

std::string to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::ball: return "ball";
    case WitnessKind::box: return "box";
    case WitnessKind::slab_S: return "slab_S";
    case WitnessKind::rect_T: return "rect_T";
    case WitnessKind::stage: return "stage";
  }
  return "?";
}

WitnessKind witness_kind(const std::string& s) {
  if (s == "ball") return WitnessKind::ball;
  if (s == "box") return WitnessKind::box;
  if (s == "slab_S" || s == "slab") return WitnessKind::slab_S;
  if (s == "rect_T" || s == "rect") return WitnessKind::rect_T;
  if (s == "stage") return WitnessKind::stage;
  throw ConfigError("unknown witness kind '" + s + "'");
}

namespace {

void need_delta(double d) {
  if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError("witness delta must be > 0");
}

// min / max of f on [0,1]; sampled, endpoints included
std::pair<double, double> f_range(const CurveFamily& f) {
  double lo = f.f(0.0), hi = lo;
  for (int i = 1; i <= 256; ++i) {
    double y = f.f(i / 256.0);
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  }
  return {lo, hi};
}

double integral_f(const CurveFamily& fam) {
  const int panels = 64;
  double s = 0.0;
  for (int i = 0; i < panels; ++i) {
    double w = 1.0 / panels;
    s += w * detail::mean_over([&](double t) { return fam.f(t); }, (i + 1) * w, w);
  }
  return s;
}

}  // namespace

WitnessSet WitnessSet::ball(const CurveFamily& f) {
  WitnessSet w;
  w.kind = WitnessKind::ball;
  w.family = f;
  return w;
}

WitnessSet WitnessSet::box(const CurveFamily& f, Interval x, Interval y) {
  if (!(x.hi > x.lo) || !(y.hi > y.lo)) throw ConfigError("box must have positive sides");
  WitnessSet w;
  w.kind = WitnessKind::box;
  w.family = f;
  w.box_x = x;
  w.box_y = y;
  return w;
}

WitnessSet WitnessSet::slab(const CurveFamily& f, double delta) {
  need_delta(delta);
  WitnessSet w;
  w.kind = WitnessKind::slab_S;
  w.family = f;
  w.delta = delta;
  return w;
}

WitnessSet WitnessSet::rect(const CurveFamily& f, double delta) {
  need_delta(delta);
  WitnessSet w;
  w.kind = WitnessKind::rect_T;
  w.family = f;
  w.delta = delta;
  return w;
}

WitnessSet WitnessSet::stage_set(const SliceSource& s, double delta) {
  if (!(delta >= 0.0)) throw ConfigError("stage thickening must be >= 0");
  WitnessSet w;
  w.kind = WitnessKind::stage;
  w.family = s.family();
  w.delta = delta;
  w.stage = &s;
  return w;
}

bool WitnessSet::contains(double X, double Y, const CurvedRect* hint) const {
  const CurveFamily& f = family;
  switch (kind) {
    case WitnessKind::ball:
      return X * X + Y * Y <= 1.0;
    case WitnessKind::box:
      return X >= box_x.lo && X <= box_x.hi && Y >= box_y.lo && Y <= box_y.hi;
    case WitnessKind::slab_S: {
      if (X < 0.0 || X > 1.0) return false;
      double y0 = f.f(X), y1 = (1.0 + delta) * y0;
      return Y >= std::min(y0, y1) && Y <= std::max(y0, y1);
    }
    case WitnessKind::rect_T: {
      if (X < 0.0 || X > std::sqrt(delta)) return false;
      return std::abs(Y - (f.f(0.0) + f.d1(0.0) * X)) <= 0.5 * delta;
    }
    case WitnessKind::stage: {
      Interval w = stage->x_window();
      if (X < w.lo || X > w.hi) return false;
      if (hint) {
        double t = X - hint->u;
        if (t >= 0.0 && t <= 1.0) {
          double ft = f.f(t);
          double lo = hint->aperture * ft + hint->v - delta;
          double hi = (hint->aperture + hint->thickness) * ft + hint->v + delta;
          if (Y >= lo && Y <= hi) return true;
        }
        if (!stage->supports_full_membership()) return false;
      }
      if (!stage->supports_full_membership())
        throw ConfigError("stage engine '" + stage->engine() +
                          "' has no exact membership; use witness search");
      SliceProfile sp = stage->slice(X, delta);
      auto it = std::upper_bound(sp.intervals.begin(), sp.intervals.end(), Y,
                                 [](double y, const Interval& iv) { return y < iv.lo; });
      return it != sp.intervals.begin() && Y <= (it - 1)->hi;
    }
  }
  return false;
}

double WitnessSet::measure(int columns, int threads) const {
  switch (kind) {
    case WitnessKind::ball: return std::numbers::pi;
    case WitnessKind::box: return (box_x.hi - box_x.lo) * (box_y.hi - box_y.lo);
    case WitnessKind::slab_S: return delta * std::abs(integral_f(family));
    case WitnessKind::rect_T: return std::pow(delta, 1.5);
    case WitnessKind::stage: return measure_stage(*stage, delta, columns, threads).measure;
  }
  return 0.0;
}

std::pair<Interval, Interval> WitnessSet::bounding_box() const {
  auto [fl, fh] = f_range(family);
  switch (kind) {
    case WitnessKind::ball: return {{-1, 1}, {-1, 1}};
    case WitnessKind::box: return {box_x, box_y};
    case WitnessKind::slab_S: {
      double a = std::min(fl, (1 + delta) * fl), b = std::max(fh, (1 + delta) * fh);
      return {{0, 1}, {a, b}};
    }
    case WitnessKind::rect_T: {
      double r = std::sqrt(delta), c0 = family.f(0.0), c1 = c0 + family.d1(0.0) * r;
      return {{0, r}, {std::min(c0, c1) - 0.5 * delta, std::max(c0, c1) + 0.5 * delta}};
    }
    case WitnessKind::stage: {
      Interval w = stage->x_window();
      double lo = INFINITY, hi = -INFINITY;
      for (int i = 0; i <= 64; ++i) {
        double x = w.lo + (w.hi - w.lo) * i / 64.0;
        SliceProfile sp = stage->slice(x, delta);
        if (sp.intervals.empty()) continue;
        lo = std::min(lo, sp.intervals.front().lo);
        hi = std::max(hi, sp.intervals.back().hi);
      }
      if (!(hi >= lo)) lo = hi = 0.0;
      return {w, {lo, hi}};
    }
  }
  return {{0, 0}, {0, 0}};
}

std::optional<Translation> witness_translation(const WitnessSet& set, double a,
                                               std::optional<CurvedRect>* hint) {
  const CurveFamily& f = set.family;
  if (hint) hint->reset();
  switch (set.kind) {
    case WitnessKind::ball:
      // curve midpoint at the centre
      return Translation{-0.5, -a * f.f(0.5)};
    case WitnessKind::box:
      return Translation{set.box_x.lo, 0.5 * (set.box_y.lo + set.box_y.hi) -
                                           0.5 * a * (f.f(0.0) + f.f(1.0))};
    case WitnessKind::slab_S:
      return Translation{0.0, 0.0};
    case WitnessKind::rect_T: {
      double r = std::sqrt(set.delta);
      double c0 = f.f(0.0), c1 = c0 + f.d1(0.0) * r;
      return Translation{0.0, 0.5 * ((c0 - a * f.f(0.0)) + (c1 - a * f.f(r)))};
    }
    case WitnessKind::stage: {
      auto r = set.stage->witness_rect(a);
      if (!r) return std::nullopt;
      if (hint) *hint = r;
      return Translation{r->u, r->v};
    }
  }
  return std::nullopt;
}

namespace {

double evaluate(const WitnessSet& set, double a, double delta, Translation tr,
                const CurvedRect* hint, const Quadrature& q) {
  const CurveFamily& f = set.family;
  long hits = 0;
  for (int i = 0; i < q.t_nodes; ++i) {
    double t = (i + 0.5) / q.t_nodes;
    double X = tr.x1 + t;
    double base = tr.x2 + a * f.f(t);
    if (set.kind == WitnessKind::stage) {
      Interval w = set.stage->x_window();
      if (X < w.lo || X > w.hi) continue;
      // one slice per t-node when hints are not enough
      bool need_slice = !hint;
      if (hint) {
        double y = X - hint->u;
        need_slice = !(y >= 0.0 && y <= 1.0);
        if (!need_slice) {
          double fy = f.f(y);
          double lo = hint->aperture * fy + hint->v - set.delta;
          double hi = (hint->aperture + hint->thickness) * fy + hint->v + set.delta;
          for (int k = 0; k < q.s_nodes; ++k) {
            double Y = base + delta * (-1.0 + (2.0 * k + 1.0) / q.s_nodes);
            if (Y >= lo && Y <= hi)
              ++hits;
            else if (set.stage->supports_full_membership() && set.contains(X, Y))
              ++hits;
          }
          continue;
        }
        if (!set.stage->supports_full_membership()) continue;
      }
      SliceProfile sp = set.stage->slice(X, set.delta);
      for (int k = 0; k < q.s_nodes; ++k) {
        double Y = base + delta * (-1.0 + (2.0 * k + 1.0) / q.s_nodes);
        auto it = std::upper_bound(sp.intervals.begin(), sp.intervals.end(), Y,
                                   [](double y, const Interval& iv) { return y < iv.lo; });
        if (it != sp.intervals.begin() && Y <= (it - 1)->hi) ++hits;
      }
      continue;
    }
    for (int k = 0; k < q.s_nodes; ++k) {
      double Y = base + delta * (-1.0 + (2.0 * k + 1.0) / q.s_nodes);
      if (set.contains(X, Y)) ++hits;
    }
  }
  return double(hits) / (double(q.t_nodes) * q.s_nodes);
}

}  // namespace

double r_delta_indicator(const WitnessSet& set, double a, double delta,
                         const SearchMode& mode, const Quadrature& quad) {
  if (!(delta > 0.0)) throw ConfigError("operator delta must be > 0");
  if (quad.t_nodes < 1 || quad.s_nodes < 1) throw ConfigError("quadrature needs nodes");
  if (!(a >= 1.0 && a <= 2.0)) throw DomainError("aperture must lie in [1,2]");
  switch (mode.kind) {
    case SearchMode::fixed:
      return evaluate(set, a, delta, mode.fixed_at, nullptr, quad);
    case SearchMode::witness: {
      std::optional<CurvedRect> hint;
      auto tr = witness_translation(set, a, &hint);
      if (!tr) return 0.0;
      return evaluate(set, a, delta, *tr, hint ? &*hint : nullptr, quad);
    }
    case SearchMode::grid: {
      if (mode.nx < 1 || mode.ny < 1) throw ConfigError("grid search with zero nodes");
      if (set.kind == WitnessKind::stage && !set.stage->supports_full_membership())
        throw ConfigError("grid search needs a materialized stage");
      auto [bx, by] = set.bounding_box();
      auto [fl, fh] = f_range(set.family);
      // translations that can put some curve point in the box
      Interval x1{bx.lo - 1.0, bx.hi};
      Interval x2{by.lo - a * fh - delta, by.hi - a * fl + delta};
      auto node = [](Interval r, int i, int n) {
        return n == 1 ? 0.5 * (r.lo + r.hi) : r.lo + (r.hi - r.lo) * i / (n - 1);
      };
      double best = 0.0;
      if (auto tr = witness_translation(set, a)) best = evaluate(set, a, delta, *tr, nullptr, quad);
      for (int i = 0; i < mode.nx; ++i)
        for (int k = 0; k < mode.ny; ++k) {
          Translation tr{node(x1, i, mode.nx), node(x2, k, mode.ny)};
          best = std::max(best, evaluate(set, a, delta, tr, nullptr, quad));
        }
      return best;
    }
  }
  return 0.0;
}

std::vector<double> uniform_grid(double lo, double hi, int n) {
  if (n < 1) throw ConfigError("grid needs at least one point");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  if (n > 1) g.back() = hi;
  return g;
}

std::vector<double> geometric_deltas(int k_from, int k_to) {
  std::vector<double> d;
  for (int k = k_from; k <= k_to; ++k) d.push_back(std::ldexp(1.0, -k));
  return d;
}

MaximalEstimate ratio_lower_bound(const WitnessSet& set, double delta, double p,
                                  double q, const std::vector<double>& a_grid,
                                  const SearchMode& mode, const Quadrature& quad,
                                  int threads, double set_measure) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw ConfigError("p, q must be >= 1");
  if (a_grid.empty()) throw ConfigError("empty aperture grid");
  if (std::isfinite(q) && a_grid.size() < 2)
    throw ConfigError("finite q needs at least two apertures");
  for (std::size_t i = 1; i < a_grid.size(); ++i)
    if (!(a_grid[i] > a_grid[i - 1])) throw ConfigError("aperture grid must increase");

  MaximalEstimate est;
  est.a_grid = a_grid;
  est.p = p;
  est.q = q;
  est.values.assign(a_grid.size(), 0.0);
  detail::parallel_for(a_grid.size(), threads, [&](std::uint64_t i) {
    est.values[i] = r_delta_indicator(set, a_grid[i], delta, mode, quad);
  });
  est.measure = set_measure >= 0.0 ? set_measure : set.measure(4096, threads);
  est.ratio_lower_bound = lq_ratio(a_grid, est.values, est.measure, p, q);
  return est;
}

double lq_ratio(const std::vector<double>& a_grid, const std::vector<double>& values,
                double measure, double p, double q) {
  if (a_grid.size() != values.size() || values.empty())
    throw ConfigError("values do not match the aperture grid");
  if (!(measure > 0.0)) throw DataError("set has zero measure");
  double norm = 0.0;
  if (!std::isfinite(q)) {
    norm = *std::max_element(values.begin(), values.end());
  } else {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < a_grid.size(); ++i)
      s += 0.5 * (a_grid[i + 1] - a_grid[i]) *
           (std::pow(values[i], q) + std::pow(values[i + 1], q));
    norm = std::pow(s, 1.0 / q);
  }
  return norm / (std::isfinite(p) ? std::pow(measure, 1.0 / p) : 1.0);
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y,
                           double* intercept) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("fit needs paired samples");
  double n = double(x.size()), mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DataError("degenerate fit (zero variance)");
  double b = sxy / sxx;
  if (intercept) *intercept = my - b * mx;
  return b;
}

ExponentFit exponent_fit(WitnessKind kind, const CurveFamily& family, double p,
                         double q, const std::vector<double>& deltas, int a_points,
                         const Quadrature& quad, int threads) {
  if (deltas.size() < 4) throw ConfigError("exponent fit needs >= 4 deltas");
  auto [dmin, dmax] = std::minmax_element(deltas.begin(), deltas.end());
  if (*dmin > 0.0 && std::log10(*dmax / *dmin) < 2.0 - 1e-12)
    throw ConfigError("deltas must span at least two decades");
  ExponentFit fit;
  fit.deltas = deltas;
  auto grid = uniform_grid(1.0, 2.0, a_points);
  std::vector<double> lx, ly;
  for (double d : deltas) {
    WitnessSet set;
    switch (kind) {
      case WitnessKind::ball: set = WitnessSet::ball(family); break;
      case WitnessKind::slab_S: set = WitnessSet::slab(family, d); break;
      case WitnessKind::rect_T: set = WitnessSet::rect(family, d); break;
      default: throw ConfigError("exponent fit supports ball, slab_S, rect_T");
    }
    double r = ratio_lower_bound(set, d, p, q, grid, SearchMode::with_witness(), quad,
                                 threads).ratio_lower_bound;
    if (!(r > 0.0)) throw DataError("zero ratio at delta " + std::to_string(d));
    fit.ratios.push_back(r);
    lx.push_back(std::log(d));
    ly.push_back(std::log(r));
  }
  fit.slope = least_squares_slope(lx, ly, &fit.intercept);
  return fit;
}

const std::map<char, DiagramPoint>& diagram_points() {
  static const std::map<char, DiagramPoint> pts = {
      {'O', {0.0, 0.0}},         {'A', {0.0, 1.0}},      {'B', {1.0 / 3, 1.0}},
      {'C', {3.0 / 8, 1.0}},     {'D', {1.0, 1.0}},      {'E', {1.0, 0.0}},
      {'F', {3.0 / 8, 0.0}},     {'G', {3.0 / 8, 5.0 / 16}}, {'H', {1.0 / 3, 1.0 / 3}}};
  return pts;
}

namespace {

constexpr double kEps = 1e-12;

double cross(DiagramPoint o, DiagramPoint a, DiagramPoint b) {
  return (a.inv_p - o.inv_p) * (b.inv_q - o.inv_q) - (a.inv_q - o.inv_q) * (b.inv_p - o.inv_p);
}

bool on_segment(DiagramPoint x, char a, char b) {
  const auto& P = diagram_points();
  DiagramPoint s = P.at(a), e = P.at(b);
  if (std::abs(cross(s, e, x)) > kEps) return false;
  return x.inv_p >= std::min(s.inv_p, e.inv_p) - kEps &&
         x.inv_p <= std::max(s.inv_p, e.inv_p) + kEps &&
         x.inv_q >= std::min(s.inv_q, e.inv_q) - kEps &&
         x.inv_q <= std::max(s.inv_q, e.inv_q) + kEps;
}

// closed convex polygon, vertices in either orientation
bool in_polygon(DiagramPoint x, const std::string& verts) {
  const auto& P = diagram_points();
  int sign = 0;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    double c = cross(P.at(verts[i]), P.at(verts[(i + 1) % verts.size()]), x);
    if (std::abs(c) <= kEps) continue;
    int s = c > 0 ? 1 : -1;
    if (sign == 0) sign = s;
    else if (s != sign) return false;
  }
  return true;
}

}  // namespace

RegionBound region_bound(double inv_p, double inv_q) {
  if (!(inv_p >= -kEps && inv_p <= 1 + kEps && inv_q >= -kEps && inv_q <= 1 + kEps))
    throw DomainError("(1/p, 1/q) must lie in the unit square");
  DiagramPoint x{inv_p, inv_q};
  double kakeya_exp = 0.5 - 1.5 * inv_p;
  double hole_exp = inv_q - inv_p;
  if (on_segment(x, 'O', 'A')) return {"OA", 0.0, 0.0};
  if (on_segment(x, 'O', 'E')) return {"OE", -inv_p, 0.0};
  if (in_polygon(x, "OABH")) return {"OABH", 0.0, 2.0 * inv_p};
  if (in_polygon(x, "BCGH")) return {"BCGH", kakeya_exp, 0.0};
  if (in_polygon(x, "CDEG")) return {"CDEG", kakeya_exp, 0.0};
  if (in_polygon(x, "OFGH")) return {"OFGH", hole_exp, 0.0};
  if (in_polygon(x, "EFG")) return {"EFG", hole_exp, 0.0};
  throw DomainError("point outside every region");  // not reached for the unit square
}

}  // namespace kakeya
