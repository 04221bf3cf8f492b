#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <sstream>

#include "gauss.hpp"
#include "kakeya/errors.hpp"
#include "kakeya/measure.hpp"

namespace kakeya {

BlockStage::BlockStage(CurveFamily family, Interval window,
                       std::vector<BlockSpec> blocks, int buckets)
    : family_(std::move(family)), window_(window), blocks_(std::move(blocks)) {
  if (buckets < 1) throw ConfigError("bucket count must be >= 1");
  std::stable_sort(blocks_.begin(), blocks_.end(),
                   [](const BlockSpec& a, const BlockSpec& b) { return a.a0 < b.a0; });
  prep_.reserve(blocks_.size());
  for (const BlockSpec& s : blocks_) {
    Prepared p;
    p.spec = s;
    p.plan.family = family_;
    p.plan.a0 = s.a0;
    p.plan.delta0 = s.delta0;
    p.plan.M = s.M;
    p.plan.steps = s.steps;
    p.plan.diagnostic = true;
    p.plan.tangent_lo = s.tangent_lo;
    p.plan.tangent_hi = s.tangent_hi;
    validate_plan(p.plan);
    p.h = p.plan.h();
    p.steps = p.plan.step_count();
    p.G = std::uint64_t(1) << (s.M - p.steps);
    std::uint64_t nb = std::min<std::uint64_t>(std::uint64_t(buckets), p.G);
    for (std::uint64_t b = 0; b < nb; ++b) {
      Bucket k;
      k.first_group = p.G * b / nb;
      k.groups = p.G * (b + 1) / nb - k.first_group;
      std::uint64_t lead = (k.first_group + k.groups / 2) << p.steps;
      for (int j = 1; j <= p.steps; ++j) {
        std::uint64_t half = std::uint64_t(1) << (j - 1);
        TangencySolution t = step_solution(p.plan, j, lead + half);
        k.levels.push_back({t.u, t.v, p.plan.aperture(lead + half), p.plan.aperture(lead)});
      }
      p.buckets.push_back(std::move(k));
    }
    prep_.push_back(std::move(p));
  }
}

BlockStage BlockStage::from_plan(const ConstructionPlan& plan, int buckets) {
  validate_plan(plan);
  BlockSpec s;
  s.a0 = plan.a0;
  s.delta0 = plan.delta0;
  s.M = plan.M;
  s.steps = plan.step_count();
  s.tangent_lo = plan.tangent_lo;
  s.tangent_hi = plan.tangent_hi;
  return BlockStage(plan.family, stage_window(plan), {s}, buckets);
}

std::uint64_t BlockStage::rect_count() const {
  std::uint64_t n = 0;
  for (const BlockSpec& s : blocks_) n += std::uint64_t(1) << s.M;
  return n;
}

namespace {

// Piecewise-constant picture of a set R folded onto the circle [0, s):
// over [t0, t1) the labels k with theta + k s in R span [kmin, kmax].
struct FoldSeg {
  double t0, t1;
  std::int64_t kmin, kmax;
};

struct Ev {
  double t;
  std::int64_t k;
  int d;
};

template <class V>
bool fold_events(const V& R, double s, std::vector<Ev>& ev) {
  ev.clear();
  for (const auto& r : R) {
    double q0 = std::floor(r.lo / s), q1 = std::floor(r.hi / s);
    if (q1 - q0 > double(1 << 22)) return false;
    for (std::int64_t k = std::int64_t(q0); k <= std::int64_t(q1); ++k) {
      double a = std::max(r.lo - double(k) * s, 0.0);
      double b = std::min(r.hi - double(k) * s, s);
      if (b > a) {
        ev.push_back({a, k, +1});
        ev.push_back({b, k, -1});
      }
    }
  }
  std::sort(ev.begin(), ev.end(), [](const Ev& x, const Ev& y) {
    return x.t < y.t || (x.t == y.t && x.d < y.d);
  });
  return true;
}

template <class V>
bool fold(const V& R, double s, std::vector<FoldSeg>& out) {
  thread_local std::vector<Ev> ev;
  if (!fold_events(R, s, ev)) return false;
  out.clear();
  if (ev.empty()) return true;
  // label counts plus lazily pruned min/max heaps
  std::int64_t base = ev[0].k, top = ev[0].k;
  for (const Ev& e : ev) {
    base = std::min(base, e.k);
    top = std::max(top, e.k);
  }
  thread_local std::vector<int> cnt;
  cnt.assign(std::size_t(top - base + 1), 0);
  std::priority_queue<std::int64_t, std::vector<std::int64_t>, std::greater<>> lo;
  std::priority_queue<std::int64_t> hi;
  std::int64_t live = 0;
  double prev = 0.0;
  for (const Ev& e : ev) {
    if (e.t > prev && live > 0) {
      while (cnt[lo.top() - base] == 0) lo.pop();
      while (cnt[hi.top() - base] == 0) hi.pop();
      out.push_back({prev, e.t, lo.top(), hi.top()});
    }
    prev = e.t;
    int& c = cnt[e.k - base];
    if (e.d > 0) {
      if (c++ == 0) {
        lo.push(e.k);
        hi.push(e.k);
      }
      ++live;
    } else {
      --c;
      --live;
    }
  }
  return true;
}

// Length of n copies for any n: over each theta the copies cover
// n + sum of min(gap, n) labels, gaps between consecutive live labels.
template <class V>
bool general_stack(const V& R, double s, std::uint64_t n, double& len) {
  thread_local std::vector<Ev> ev;
  if (!fold_events(R, s, ev)) return false;
  const std::int64_t N = std::int64_t(n);
  auto cap = [N](std::int64_t g) { return double(std::min(g, N)); };
  std::map<std::int64_t, int> live;
  double S = 0.0, acc = 0.0, prev = 0.0;
  for (const Ev& e : ev) {
    if (e.t > prev && !live.empty()) acc += (double(N) + S) * (e.t - prev);
    prev = e.t;
    if (e.d > 0) {
      auto [it, fresh] = live.try_emplace(e.k, 0);
      if (++it->second == 1 && fresh) {
        auto nx = std::next(it);
        bool hp = it != live.begin(), hn = nx != live.end();
        std::int64_t p = hp ? std::prev(it)->first : 0;
        if (hp && hn) S -= cap(nx->first - p);
        if (hp) S += cap(e.k - p);
        if (hn) S += cap(nx->first - e.k);
      }
    } else {
      auto it = live.find(e.k);
      if (--it->second == 0) {
        auto nx = std::next(it);
        bool hp = it != live.begin(), hn = nx != live.end();
        std::int64_t p = hp ? std::prev(it)->first : 0;
        if (hp) S -= cap(e.k - p);
        if (hn) S -= cap(nx->first - e.k);
        if (hp && hn) S += cap(nx->first - p);
        live.erase(it);
      }
    }
  }
  len = acc;
  return true;
}

std::int64_t max_span(const std::vector<FoldSeg>& f) {
  std::int64_t m = 0;
  for (const FoldSeg& g : f) m = std::max(m, g.kmax - g.kmin);
  return m;
}

// Length of n copies at spacing s; valid when n > every label span.
double stack_length(const std::vector<FoldSeg>& f, std::uint64_t n) {
  double cover = 0.0, spread = 0.0;
  for (const FoldSeg& g : f) {
    cover += g.t1 - g.t0;
    spread += double(g.kmax - g.kmin) * (g.t1 - g.t0);
  }
  return double(n) * cover + spread;
}

// |U_A cap U_B| for n_a copies of A at labels -n_a..-1 and n_b copies of B
// at labels 0..n_b-1.
double join_overlap(const std::vector<FoldSeg>& A, std::uint64_t na,
                    const std::vector<FoldSeg>& B, std::uint64_t nb) {
  double tot = 0.0;
  std::size_t i = 0, j = 0;
  while (i < A.size() && j < B.size()) {
    double lo = std::max(A[i].t0, B[j].t0), hi = std::min(A[i].t1, B[j].t1);
    if (hi > lo) {
      std::int64_t top = std::min(A[i].kmax - 1, B[j].kmax + std::int64_t(nb) - 1);
      std::int64_t bot = std::max(A[i].kmin - std::int64_t(na), B[j].kmin);
      if (top >= bot) tot += double(top - bot + 1) * (hi - lo);
    }
    if (A[i].t1 < B[j].t1) ++i; else ++j;
  }
  return tot;
}

}  // namespace

void BlockStage::group_profile(const Prepared& b, const Bucket& k, double x,
                               double delta, std::vector<SInt>& R,
                               std::vector<SInt>& tmp) const {
  const CurveFamily& fam = family_;
  double fx = fam.f(x), f1x = fam.d1(x);
  R.clear();
  R.push_back({-delta, b.h * fx + delta, 0.0, b.h * f1x});
  auto f1 = [&](double t) { return fam.d1(t); };
  auto f2 = [&](double t) { return fam.d2(t); };
  thread_local std::vector<SInt> merged;
  for (const Level& L : k.levels) {
    double d = L.a - L.a_tilde;
    // a f(x-u) + v - a~ f(x) and its x-derivative, cancellation-free
    double g = -L.a * L.u * detail::mean_over(f1, x, L.u) + L.v + d * fx;
    double gp = -L.a * L.u * detail::mean_over(f2, x, L.u) + d * f1x;
    tmp.clear();
    bool sorted = true;
    for (const SInt& e : R) {
      SInt t{e.lo - L.u * e.dlo + g, e.hi - L.u * e.dhi + g, e.dlo + gp, e.dhi + gp};
      if (!tmp.empty() && t.lo < tmp.back().lo) sorted = false;
      tmp.push_back(t);
    }
    if (!sorted)
      std::sort(tmp.begin(), tmp.end(), [](const SInt& a, const SInt& c) { return a.lo < c.lo; });
    merged.clear();
    std::size_t i = 0, j = 0;
    while (i < R.size() || j < tmp.size()) {
      const SInt& e = (j >= tmp.size() || (i < R.size() && R[i].lo <= tmp[j].lo)) ? R[i++] : tmp[j++];
      if (!merged.empty() && e.lo <= merged.back().hi) {
        if (e.hi > merged.back().hi) {
          merged.back().hi = e.hi;
          merged.back().dhi = e.dhi;
        }
      } else {
        merged.push_back(e);
      }
    }
    R.swap(merged);
  }
}

double BlockStage::block_length(const Prepared& b, double x_abs, double delta) const {
  double x = x_abs - b.spec.shift_u;
  if (x < 0.0 || x > 1.0) return 0.0;
  const std::size_t nb = b.buckets.size();
  const double s = std::ldexp(b.h, b.steps) * family_.f(x);
  std::vector<std::vector<SInt>> R(nb);
  std::vector<SInt> tmp;
  std::vector<Interval> buf;
  group_profile(b, b.buckets[nb / 2], x, delta, R[nb / 2], tmp);

  if (!(s > 0.0)) {  // every group stacks on the same base
    for (std::size_t i = 0; i < nb; ++i)
      if (i != nb / 2) group_profile(b, b.buckets[i], x, delta, R[i], tmp);
    for (const auto& r : R)
      for (const SInt& e : r) buf.push_back({e.lo, e.hi});
    return union_length(buf);
  }
  auto single = [&]() {
    // interaction range exceeds the buckets: one representative for all
    // groups (the middle bucket's)
    double len = 0.0;
    if (general_stack(R[nb / 2], s, b.G, len)) return len;
    if (double(b.G) * double(R[nb / 2].size()) > double(1 << 26))
      throw SizeError("hierarchical slice fallback too large");
    std::vector<Interval> out;
    block_intervals(b, x_abs, delta, out);
    return union_length(out);
  };
  {
    double E = R[nb / 2].back().hi - R[nb / 2].front().lo;
    if (E / s + 2.0 >= double(b.G / nb)) return single();
  }
  for (std::size_t i = 0; i < nb; ++i)
    if (i != nb / 2) group_profile(b, b.buckets[i], x, delta, R[i], tmp);
  std::vector<std::vector<FoldSeg>> F(nb);
  std::int64_t kmin = 0, kmax = 0;
  bool ok = true;
  for (std::size_t i = 0; i < nb && ok; ++i) {
    ok = fold(R[i], s, F[i]);
    for (const FoldSeg& g : F[i]) {
      kmin = std::min(kmin, g.kmin);
      kmax = std::max(kmax, g.kmax);
    }
  }
  // each bucket must outlast every label span, so that stacks are periodic
  // and only neighbouring buckets meet
  for (std::size_t i = 0; i < nb && ok; ++i)
    if (std::int64_t(b.buckets[i].groups) <= std::max(max_span(F[i]), kmax - kmin + 1))
      ok = false;
  if (!ok) return single();
  double total = 0.0;
  for (std::size_t i = 0; i < nb; ++i) total += stack_length(F[i], b.buckets[i].groups);
  for (std::size_t i = 0; i + 1 < nb; ++i)
    total -= join_overlap(F[i], b.buckets[i].groups, F[i + 1], b.buckets[i + 1].groups);
  return total;
}

void BlockStage::block_intervals(const Prepared& b, double x_abs, double delta,
                                 std::vector<Interval>& out) const {
  double x = x_abs - b.spec.shift_u;
  if (x < 0.0 || x > 1.0) return;
  std::vector<SInt> R, tmp;
  const double fx = family_.f(x);
  const double base = b.spec.a0 * fx + b.spec.shift_v;
  const double s = std::ldexp(b.h, b.steps) * fx;
  for (const Bucket& k : b.buckets) {
    group_profile(b, k, x, delta, R, tmp);
    for (std::uint64_t g = k.first_group; g < k.first_group + k.groups; ++g) {
      double off = base + double(g) * s;
      for (const SInt& e : R) out.push_back({e.lo + off, e.hi + off});
    }
  }
}

void BlockStage::raw_intervals(double x, double delta,
                               std::vector<Interval>& out) const {
  for (const Prepared& b : prep_) block_intervals(b, x, delta, out);
}

double BlockStage::slice_length(double x, double delta) const {
  if (prep_.size() == 1) return block_length(prep_[0], x, delta);
  // one sorted run per block, then a pairwise run merge
  thread_local std::vector<Interval> buf;
  thread_local std::vector<std::size_t> runs;
  buf.clear();
  runs.assign(1, 0);
  for (const Prepared& b : prep_) {
    std::size_t start = buf.size();
    block_intervals(b, x, delta, buf);
    auto first = buf.begin() + std::ptrdiff_t(start);
    if (!std::is_sorted(first, buf.end(),
                        [](const Interval& p, const Interval& q) { return p.lo < q.lo; }))
      std::sort(first, buf.end(),
                [](const Interval& p, const Interval& q) { return p.lo < q.lo; });
    if (buf.size() > start) runs.push_back(buf.size());
  }
  return union_length_of_runs(buf, runs);
}

std::optional<CurvedRect> BlockStage::witness_rect(double a) const {
  if (prep_.empty() || a < prep_.front().spec.a0) return std::nullopt;
  auto it = std::upper_bound(prep_.begin(), prep_.end(), a,
                             [](double v, const Prepared& p) { return v < p.spec.a0; });
  const Prepared& b = *(it - 1);
  if (a > b.spec.a0 + b.spec.delta0) return std::nullopt;
  std::uint64_t last = (std::uint64_t(1) << b.spec.M) - 1;
  double q = std::floor((a - b.spec.a0) / b.h);
  std::uint64_t n = q <= 0.0 ? 0 : std::min<std::uint64_t>(last, std::uint64_t(q));
  auto [u, v] = translation_of(b.plan, n);
  return CurvedRect{b.spec.first_index + n, b.plan.aperture(n), b.h,
                    u + b.spec.shift_u, v + b.spec.shift_v};
}

}  // namespace kakeya
