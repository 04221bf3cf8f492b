#include "kakeya/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kakeya/errors.hpp"
#include "parallel.hpp"

namespace kakeya {

double iterated_window_start(const std::vector<int>& ms, int depth) {
  double keep = 1.0;
  for (int l = 0; l < depth && l < int(ms.size()); ++l) keep *= 1.0 - cutoff_start(ms[l]);
  return 1.0 - keep;
}

namespace {

void check_levels(const IterationPlan& p, int charged_levels) {
  if (p.depth < 1) throw ConfigError("depth must be >= 1");
  if (int(p.m_sequence.size()) < p.depth) {
    std::ostringstream os;
    os << "m_sequence has " << p.m_sequence.size() << " entries, depth is " << p.depth;
    throw ConfigError(os.str());
  }
  int total = 0;
  for (int l = 0; l < p.depth; ++l) {
    ConstructionPlan c;
    c.family = p.family;
    c.M = p.m_sequence[l];
    c.diagnostic = p.diagnostic;
    try {
      validate_plan(c);
    } catch (const ConfigError& e) {
      std::ostringstream os;
      os << "level " << l + 1 << ": " << e.what();
      throw ConfigError(os.str());
    }
    if (l < charged_levels) total += c.M;
  }
  if (total > 62 || (std::uint64_t(1) << total) > p.rect_budget) {
    std::ostringstream os;
    os << "rect count 2^" << total << " exceeds budget " << p.rect_budget;
    throw SizeError(os.str());
  }
  if (p.rescaled && p.rescale_start >= 1.0)
    throw ConfigError("rescale_start must be < 1");
}

Interval window_after(const IterationPlan& p, int levels) {
  if (p.diagnostic) return {0.0, 1.0};
  return {iterated_window_start(p.m_sequence, levels), 1.0};
}

ConstructionPlan top_plan(const IterationPlan& p) {
  ConstructionPlan c;
  c.family = p.family;
  c.a0 = p.a0;
  c.delta0 = p.delta0;
  c.M = p.m_sequence[0];
  c.diagnostic = p.diagnostic;
  return c;
}

// Materializes levels 1..depth.
StageSet build_levels(const IterationPlan& p, int depth, int threads) {
  ConstructionPlan top = top_plan(p);
  StageSet s = build_stage(top, threads);
  for (int level = 2; level <= depth; ++level) {
    const int M = p.m_sequence[level - 1];
    const std::uint64_t per = std::uint64_t(1) << M;
    const Interval pw = window_after(p, level - 1);
    std::vector<CurvedRect> next(s.rects.size() * per);
    detail::parallel_for(s.rects.size(), threads, [&](std::uint64_t k) {
      const CurvedRect& par = s.rects[k];
      ConstructionPlan c = child_plan(p, par, level, pw);
      TranslationTable t;
      try {
        t = build_translation_table(c, 1);
      } catch (const Error& e) {
        throw Error(e.category(), "parent path " + s.parent_path(par.index) + ": " + e.what());
      }
      if (!p.diagnostic) {
        double worst = 0.0;
        for (std::uint64_t i = 0; i < per; ++i)
          worst = std::max({worst, t.u_total[i], t.v_total[i]});
        if (!(worst < cutoff_start(M)))
          throw ConfigError("parent path " + s.parent_path(par.index) +
                            ": total translation bound violated");
      }
      const double h = c.h();
      for (std::uint64_t i = 0; i < per; ++i)
        next[k * per + i] = {(par.index << M) | i, c.aperture(i), h,
                             par.u + t.u_total[i], par.v + t.v_total[i]};
    });
    s.rects.swap(next);
    s.m_sequence.push_back(M);
    s.depth = level;
  }
  s.x_window = window_after(p, depth);
  s.rescaled = p.rescaled;
  return s;
}

}  // namespace

void validate_iteration(const IterationPlan& plan) {
  check_levels(plan, plan.depth);
  validate_plan(top_plan(plan));
}

ConstructionPlan child_plan(const IterationPlan& p, const CurvedRect& par,
                            int level, const Interval& pw) {
  ConstructionPlan c;
  c.family = p.family;
  c.a0 = par.aperture;
  c.delta0 = par.thickness;
  c.M = p.m_sequence[level - 1];
  c.diagnostic = true;  // the window is applied to the whole iterated set
  if (p.rescaled) {
    c.tangent_lo = p.rescale_start >= 0.0 ? p.rescale_start : pw.lo;
    c.tangent_hi = 1.0;
  }
  return c;
}

StageSet build_iterated(const IterationPlan& plan, int threads) {
  validate_iteration(plan);
  return build_levels(plan, plan.depth, threads);
}

BlockStage iterated_blocks(const IterationPlan& plan, int threads, int buckets) {
  check_levels(plan, plan.depth - 1);
  validate_plan(top_plan(plan));
  const Interval w = window_after(plan, plan.depth);
  if (plan.depth == 1) {
    ConstructionPlan top = top_plan(plan);
    BlockStage b = BlockStage::from_plan(top, buckets);
    return BlockStage(plan.family, w, b.blocks(), buckets);
  }
  StageSet parent = build_levels(plan, plan.depth - 1, threads);
  const Interval pw = parent.x_window;
  const int M = plan.m_sequence[plan.depth - 1];
  std::vector<BlockSpec> blocks;
  blocks.reserve(parent.rects.size());
  for (const CurvedRect& r : parent.rects) {
    ConstructionPlan c = child_plan(plan, r, plan.depth, pw);
    BlockSpec b;
    b.a0 = c.a0;
    b.delta0 = c.delta0;
    b.M = M;
    b.steps = c.step_count();
    b.tangent_lo = c.tangent_lo;
    b.tangent_hi = c.tangent_hi;
    b.shift_u = r.u;
    b.shift_v = r.v;
    b.first_index = r.index << M;
    blocks.push_back(b);
  }
  return BlockStage(plan.family, w, std::move(blocks), buckets);
}

NestingResult nesting_check(const SliceSource& outer, const SliceSource& inner,
                            double delta_outer, double delta_inner, int columns,
                            int threads, double slack) {
  const Interval wo = outer.x_window(), wi = inner.x_window();
  if (wi.lo < wo.lo || wi.hi > wo.hi) {
    std::ostringstream os;
    os << "mismatched x_windows: inner [" << wi.lo << ", " << wi.hi
       << "] not inside outer [" << wo.lo << ", " << wo.hi << "]";
    throw ConfigError(os.str());
  }
  if (columns < 1) throw ConfigError("columns must be >= 1");
  std::vector<double> worst(columns, 0.0);
  std::vector<std::uint64_t> seen(columns, 0);
  detail::parallel_for(std::uint64_t(columns), threads, [&](std::uint64_t c) {
    double x = wi.lo + (double(c) + 0.5) * (wi.hi - wi.lo) / columns;
    std::vector<Interval> raw;
    outer.raw_intervals(x, delta_outer, raw);
    const std::vector<Interval> U = merge_intervals(std::move(raw));
    std::size_t hit = 0;
    double w = 0.0;
    std::uint64_t n = 0;
    inner.visit_intervals(x, delta_inner, [&](double lo, double hi) {
      ++n;
      if (hit < U.size() && U[hit].lo <= lo && hi <= U[hit].hi) return;
      auto it = std::upper_bound(U.begin(), U.end(), lo,
                                 [](double v, const Interval& r) { return v < r.hi; });
      double covered = 0.0;
      for (auto k = it; k != U.end() && k->lo < hi; ++k)
        covered += std::min(hi, k->hi) - std::max(lo, k->lo);
      double miss = (hi - lo) - covered;
      if (miss <= 0.0 && it != U.end()) hit = std::size_t(it - U.begin());
      w = std::max(w, miss);
    });
    worst[c] = w;
    seen[c] = n;
  });
  NestingResult r;
  r.columns = columns;
  for (int c = 0; c < columns; ++c) {
    r.intervals_checked += seen[c];
    if (worst[c] > r.worst_violation) {
      r.worst_violation = worst[c];
      r.worst_x = wi.lo + (c + 0.5) * (wi.hi - wi.lo) / columns;
    }
  }
  r.contained = r.worst_violation <= slack;
  return r;
}

}  // namespace kakeya
