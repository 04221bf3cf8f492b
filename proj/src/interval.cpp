#include "kakeya/interval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kakeya/errors.hpp"

namespace kakeya {

namespace {

constexpr auto by_lo = [](const Interval& a, const Interval& b) {
  return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
};

// Merge two sorted disjoint runs into dst, joining overlaps.
Interval* merge_runs(const Interval* a, const Interval* ae, const Interval* b,
                     const Interval* be, Interval* dst) {
  Interval* out = dst;
  while (a != ae || b != be) {
    const Interval& e = (b == be || (a != ae && a->lo <= b->lo)) ? *a++ : *b++;
    if (out != dst && e.lo <= (out - 1)->hi) {
      if (e.hi > (out - 1)->hi) (out - 1)->hi = e.hi;
    } else {
      *out++ = e;
    }
  }
  return out;
}

}  // namespace

std::vector<Interval> merge_intervals(std::vector<Interval> raw) {
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const Interval& r = raw[i];
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi)) {
      std::ostringstream os;
      os << "non-finite interval endpoint at input " << i;
      throw DataError(os.str());
    }
    if (r.hi < r.lo) {
      std::ostringstream os;
      os << "interval " << i << " has hi < lo (" << r.lo << ", " << r.hi << ")";
      throw DataError(os.str());
    }
  }
  std::sort(raw.begin(), raw.end(), by_lo);
  std::vector<Interval> out;
  out.reserve(raw.size());
  for (const Interval& r : raw) {
    if (!out.empty() && r.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, r.hi);
    } else {
      out.push_back(r);
    }
  }
  // zero-length survivors carry no measure
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const Interval& r) { return !(r.hi > r.lo); }),
            out.end());
  return out;
}

double union_length(std::vector<Interval>& raw) {
  if (raw.empty()) return 0.0;
  std::sort(raw.begin(), raw.end(), by_lo);
  double total = 0.0;
  double lo = raw[0].lo, hi = raw[0].hi;
  for (std::size_t i = 1; i < raw.size(); ++i) {
    if (raw[i].lo <= hi) {
      if (raw[i].hi > hi) hi = raw[i].hi;
    } else {
      total += hi - lo;
      lo = raw[i].lo;
      hi = raw[i].hi;
    }
  }
  return total + (hi - lo);
}

double union_length_of_runs(std::vector<Interval>& data,
                            std::vector<std::size_t>& runs) {
  if (data.empty()) return 0.0;
  thread_local std::vector<Interval> other;
  thread_local std::vector<std::size_t> next;
  other.resize(data.size());
  Interval* src = data.data();
  Interval* dst = other.data();
  // collapse each run first so the passes below see disjoint runs
  bool singletons = true;
  for (std::size_t r = 0; r + 1 < runs.size() && singletons; ++r)
    singletons = runs[r + 1] - runs[r] <= 1;
  if (!singletons) {
    next.clear();
    next.push_back(0);
    Interval* w = dst;
    for (std::size_t r = 0; r + 1 < runs.size(); ++r) {
      w = merge_runs(src + runs[r], src + runs[r + 1], nullptr, nullptr, w);
      next.push_back(std::size_t(w - dst));
    }
    runs.swap(next);
    std::swap(src, dst);
  }
  while (runs.size() > 2) {
    next.clear();
    next.push_back(0);
    Interval* w = dst;
    std::size_t r = 0;
    for (; r + 2 < runs.size(); r += 2) {
      w = merge_runs(src + runs[r], src + runs[r + 1], src + runs[r + 1],
                     src + runs[r + 2], w);
      next.push_back(std::size_t(w - dst));
    }
    if (r + 1 < runs.size()) {
      w = std::copy(src + runs[r], src + runs[r + 1], w);
      next.push_back(std::size_t(w - dst));
    }
    runs.swap(next);
    std::swap(src, dst);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < runs[1]; ++i) total += src[i].hi - src[i].lo;
  return total;
}

double total_length(const std::vector<Interval>& merged) {
  double t = 0.0;
  for (const Interval& r : merged) t += r.hi - r.lo;
  return t;
}

}  // namespace kakeya
