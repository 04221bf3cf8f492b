#include "kakeya/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kakeya/errors.hpp"
#include "parallel.hpp"

namespace kakeya {

double SliceSource::slice_length(double x, double delta) const {
  thread_local std::vector<Interval> buf;
  buf.clear();
  raw_intervals(x, delta, buf);
  return union_length(buf);
}

void SliceSource::visit_intervals(
    double x, double delta, const std::function<void(double, double)>& fn) const {
  std::vector<Interval> buf;
  raw_intervals(x, delta, buf);
  for (const Interval& r : buf) fn(r.lo, r.hi);
}

SliceProfile SliceSource::slice(double x0, double delta) const {
  Interval w = x_window();
  if (!(x0 >= w.lo && x0 <= w.hi)) {
    std::ostringstream os;
    os << "column x0=" << x0 << " outside window [" << w.lo << ", " << w.hi << "]";
    throw DomainError(os.str());
  }
  std::vector<Interval> raw;
  raw_intervals(x0, delta, raw);
  SliceProfile p;
  p.x0 = x0;
  p.intervals = merge_intervals(std::move(raw));
  p.total_length = total_length(p.intervals);
  return p;
}

void ExactSlicer::raw_intervals(double x, double delta,
                                std::vector<Interval>& out) const {
  const CurveFamily& fam = stage_.family();
  out.reserve(out.size() + stage_.rects.size());
  for (const CurvedRect& r : stage_.rects) {
    double y = x - r.u;
    if (y < 0.0 || y > 1.0) continue;
    double fy = fam.f(y);
    out.push_back({r.aperture * fy + r.v - delta,
                   (r.aperture + r.thickness) * fy + r.v + delta});
  }
}

void ExactSlicer::visit_intervals(
    double x, double delta, const std::function<void(double, double)>& fn) const {
  const CurveFamily& fam = stage_.family();
  for (const CurvedRect& r : stage_.rects) {
    double y = x - r.u;
    if (y < 0.0 || y > 1.0) continue;
    double fy = fam.f(y);
    fn(r.aperture * fy + r.v - delta, (r.aperture + r.thickness) * fy + r.v + delta);
  }
}

double ExactSlicer::slice_length(double x, double delta) const {
  thread_local std::vector<Interval> A;
  thread_local std::vector<std::size_t> runs;
  A.clear();
  raw_intervals(x, delta, A);
  runs.resize(A.size() + 1);
  for (std::size_t i = 0; i <= A.size(); ++i) runs[i] = i;
  return union_length_of_runs(A, runs);
}

std::optional<CurvedRect> ExactSlicer::witness_rect(double a) const {
  const auto& rs = stage_.rects;
  if (rs.empty() || a < rs.front().aperture) return std::nullopt;
  auto it = std::upper_bound(rs.begin(), rs.end(), a,
                             [](double v, const CurvedRect& r) { return v < r.aperture; });
  const CurvedRect& r = *(it - 1);
  if (a > r.aperture + r.thickness) return std::nullopt;
  return r;
}

SliceProfile slice(const StageSet& stage, double x0, double delta) {
  return ExactSlicer(stage).slice(x0, delta);
}

MeasureReport measure_stage(const SliceSource& src, double delta, int columns,
                            int threads, bool keep, int scale_M,
                            double scale_delta0) {
  if (columns < 2) throw ConfigError("columns must be >= 2");
  if (!(delta >= 0.0)) throw ConfigError("delta must be >= 0");
  MeasureReport rep;
  rep.delta = delta;
  rep.columns = columns;
  rep.window = src.x_window();
  rep.engine = src.engine();
  double width = rep.window.hi - rep.window.lo;
  if (width > 0.0) {
    std::vector<double> len(columns, 0.0);
    detail::parallel_for(std::uint64_t(columns), threads, [&](std::uint64_t i) {
      double x = rep.window.lo + (double(i) + 0.5) * width / columns;
      len[i] = src.slice_length(x, delta);
    });
    double sum = 0.0;
    for (int i = 0; i < columns; ++i) sum += len[i];
    rep.measure = width * sum / columns;
    if (keep) {
      rep.per_column.reserve(columns);
      for (int i = 0; i < columns; ++i)
        rep.per_column.emplace_back(rep.window.lo + (i + 0.5) * width / columns, len[i]);
    }
  }
  if (scale_M > 0) rep.scaled = rep.measure * double(scale_M) * scale_M / scale_delta0;
  return rep;
}

MeasureReport measure_stage(const StageSet& stage, double delta, int columns,
                            int threads, bool keep) {
  ExactSlicer ex(stage);
  return measure_stage(ex, delta, columns, threads, keep, stage.plan.M,
                       stage.plan.delta0);
}

GroupExtent group_thickness(const StageSet& stage, double x0, int j) {
  const std::uint64_t N = stage.rects.size();
  if (j < 0 || j > 62 || (std::uint64_t(1) << j) > std::max<std::uint64_t>(N, 1)) {
    std::ostringstream os;
    os << "group level j=" << j << " out of range for " << N << " rects";
    throw DomainError(os.str());
  }
  const CurveFamily& fam = stage.family();
  const std::uint64_t size = std::uint64_t(1) << j;
  GroupExtent g;
  for (std::uint64_t p = 0; p < N; p += size) {
    double bot = INFINITY, top = -INFINITY;
    for (std::uint64_t n = p; n < std::min(N, p + size); ++n) {
      const CurvedRect& r = stage.rects[n];
      double y = x0 - r.u;
      if (y < 0.0 || y > 1.0) continue;
      double fy = fam.f(y);
      bot = std::min(bot, r.aperture * fy + r.v);
      top = std::max(top, (r.aperture + r.thickness) * fy + r.v);
    }
    if (!(top >= bot)) continue;
    ++g.groups;
    if (top - bot > g.max_extent) {
      g.max_extent = top - bot;
      g.leader = p;
    }
  }
  return g;
}

}  // namespace kakeya
