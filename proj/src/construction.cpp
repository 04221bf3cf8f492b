#include "kakeya/construction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kakeya/errors.hpp"
#include "parallel.hpp"

namespace kakeya {

double ConstructionPlan::h() const { return delta0 * std::ldexp(1.0, -M); }

double ConstructionPlan::x_j(int j) const {
  return tangent_lo + (tangent_hi - tangent_lo) * (2.0 * j / double(M));
}

double cutoff_start(int M) { return 4.0 * std::log2(double(M)) / double(M); }

Interval stage_window(const ConstructionPlan& plan) {
  if (plan.diagnostic) return {0.0, 1.0};
  return {cutoff_start(plan.M), 1.0};
}

void validate_plan(const ConstructionPlan& p) {
  std::ostringstream os;
  if (!p.family.eval0 || !p.family.eval1 || !p.family.eval2 || !p.family.eval3)
    throw ConfigError("plan has no curve family");
  if (!(p.a0 >= 1.0 && p.a0 <= 2.0)) {
    os << "a0 in [1,2] violated: a0=" << p.a0;
    throw ConfigError(os.str());
  }
  if (!(p.delta0 > 0.0 && p.a0 + p.delta0 <= 2.0)) {
    os << "0 < delta0 <= 2 - a0 violated: a0=" << p.a0 << " delta0=" << p.delta0;
    throw ConfigError(os.str());
  }
  if (p.M < 2 || p.M % 2 != 0 || p.M > 62) {
    os << "M must be an even integer in [2,62]: M=" << p.M;
    throw ConfigError(os.str());
  }
  if (!(p.tangent_lo >= 0.0 && p.tangent_lo < p.tangent_hi && p.tangent_hi <= 1.0)) {
    os << "tangency domain must satisfy 0 <= lo < hi <= 1: [" << p.tangent_lo
       << ", " << p.tangent_hi << "]";
    throw ConfigError(os.str());
  }
  if (p.diagnostic) {
    if (p.steps > p.m()) {
      os << "steps <= M/2 violated: steps=" << p.steps << " M=" << p.M;
      throw ConfigError(os.str());
    }
    return;
  }
  if (p.M < 8 || p.M % 4 != 0) {
    os << "M >= 8 and M divisible by 4 violated: M=" << p.M;
    throw ConfigError(os.str());
  }
  if (cutoff_start(p.M) > 1.0) {
    os << "cutoff 4*log2(M)/M <= 1 violated: 4*log2(" << p.M
       << ")/" << p.M << " = " << cutoff_start(p.M);
    throw ConfigError(os.str());
  }
  if (p.steps >= 0 && p.steps != p.m() - 1) {
    os << "steps override needs diagnostic mode: steps=" << p.steps;
    throw ConfigError(os.str());
  }
}

std::uint64_t binary_floor(std::uint64_t n, int j) {
  if (j <= 1) return n;
  if (j - 1 >= 64) return 0;
  return n - (n & ((std::uint64_t(1) << (j - 1)) - 1));
}

TangencySolution step_solution(const ConstructionPlan& plan, int j,
                               std::uint64_t leader) {
  std::uint64_t half = std::uint64_t(1) << (j - 1);
  double a = plan.aperture(leader), at = plan.aperture(leader - half);
  std::ostringstream pre;
  pre << "step j=" << j << " n=" << leader << ": ";
  try {
    return solve_tangency(plan.family, a, at, plan.x_j(j));
  } catch (const OrderingError& e) {
    throw OrderingError(pre.str() + e.what());
  } catch (const DomainError& e) {
    throw DomainError(pre.str() + e.what());
  } catch (const SolverError& e) {
    throw SolverError(pre.str() + e.what());
  }
}

double TranslationTable::step_u(int j, std::uint64_t leader) const {
  return u_step[j - 1][leader >> j];
}
double TranslationTable::step_v(int j, std::uint64_t leader) const {
  return v_step[j - 1][leader >> j];
}

double TranslationTable::partial_u(std::uint64_t n, int j) const {
  double s = 0.0;
  for (int i = 1; i <= std::min(j, steps); ++i)
    if (epsilon(n, i)) s += step_u(i, binary_floor(n, i));
  return s;
}
double TranslationTable::partial_v(std::uint64_t n, int j) const {
  double s = 0.0;
  for (int i = 1; i <= std::min(j, steps); ++i)
    if (epsilon(n, i)) s += step_v(i, binary_floor(n, i));
  return s;
}

std::pair<double, double> TranslationTable::gated_total(std::uint64_t n) const {
  return {partial_u(n, steps), partial_v(n, steps)};
}

TranslationTable build_translation_table(const ConstructionPlan& plan,
                                         int threads) {
  validate_plan(plan);
  if (plan.M > kMaxMaterializedM) {
    std::ostringstream os;
    os << "translation table for M=" << plan.M << " exceeds 2^"
       << kMaxMaterializedM << " entries";
    throw SizeError(os.str());
  }
  TranslationTable t;
  t.M = plan.M;
  t.steps = plan.step_count();
  const std::uint64_t N = plan.rect_count();
  t.u_step.resize(t.steps);
  t.v_step.resize(t.steps);
  for (int j = 1; j <= t.steps; ++j) {
    std::uint64_t count = N >> j;
    auto& us = t.u_step[j - 1];
    auto& vs = t.v_step[j - 1];
    us.assign(count, 0.0);
    vs.assign(count, 0.0);
    std::uint64_t half = std::uint64_t(1) << (j - 1);
    detail::parallel_for(count, threads, [&](std::uint64_t k) {
      TangencySolution s = step_solution(plan, j, (k << j) + half);
      us[k] = s.u;
      vs[k] = s.v;
    });
  }
  // Apply step j to every member of each upper half-group, j ascending:
  // the same summation order as gated_total, so the two agree bitwise.
  t.u_total.assign(N, 0.0);
  t.v_total.assign(N, 0.0);
  for (int j = 1; j <= t.steps; ++j) {
    std::uint64_t half = std::uint64_t(1) << (j - 1);
    const auto& us = t.u_step[j - 1];
    const auto& vs = t.v_step[j - 1];
    for (std::uint64_t k = 0; k < us.size(); ++k) {
      std::uint64_t lead = (k << j) + half;
      for (std::uint64_t i = lead; i < lead + half; ++i) {
        t.u_total[i] += us[k];
        t.v_total[i] += vs[k];
      }
    }
  }
  return t;
}

std::pair<double, double> translation_of(const ConstructionPlan& plan,
                                         std::uint64_t n) {
  double u = 0.0, v = 0.0;
  for (int j = 1; j <= plan.step_count(); ++j) {
    if (!epsilon(n, j)) continue;
    TangencySolution s = step_solution(plan, j, binary_floor(n, j));
    u += s.u;
    v += s.v;
  }
  return {u, v};
}

TranslationBounds translation_bounds(const ConstructionPlan& plan,
                                     const TranslationTable& t) {
  TranslationBounds b;
  if (t.u_total.empty()) return b;
  b.min_u = b.max_u = t.u_total[0];
  b.min_v = b.max_v = t.v_total[0];
  const double unit = plan.delta0 * std::ldexp(1.0, -plan.M / 2);
  for (std::uint64_t n = 0; n < t.size(); ++n) {
    b.max_u = std::max(b.max_u, t.u_total[n]);
    b.min_u = std::min(b.min_u, t.u_total[n]);
    b.max_v = std::max(b.max_v, t.v_total[n]);
    b.min_v = std::min(b.min_v, t.v_total[n]);
    double U = 0.0, V = 0.0;
    for (int j = 1; j <= t.steps; ++j) {
      if (epsilon(n, j)) {
        std::uint64_t l = binary_floor(n, j);
        U += t.step_u(j, l);
        V += t.step_v(j, l);
      }
      double scale = plan.delta0 * std::ldexp(1.0, j - plan.M);
      b.C_partial = std::max(b.C_partial, std::max(U, V) / scale);
    }
  }
  b.C_u = b.max_u / unit;
  b.C_v = b.max_v / unit;
  return b;
}

StageSet build_stage(const ConstructionPlan& plan, const TranslationTable& t) {
  validate_plan(plan);
  StageSet s;
  s.plan = plan;
  s.x_window = stage_window(plan);
  s.depth = 1;
  s.m_sequence = {plan.M};
  if (!plan.diagnostic) {
    double worst = 0.0;
    for (std::uint64_t n = 0; n < t.size(); ++n)
      worst = std::max({worst, t.u_total[n], t.v_total[n]});
    if (!(worst < cutoff_start(plan.M))) {
      std::ostringstream os;
      os << "total translation bound max shift < 4*log2(M)/M violated: "
         << worst << " >= " << cutoff_start(plan.M);
      throw ConfigError(os.str());
    }
  }
  const double h = plan.h();
  s.rects.resize(t.size());
  for (std::uint64_t n = 0; n < t.size(); ++n)
    s.rects[n] = {n, plan.aperture(n), h, t.u_total[n], t.v_total[n]};
  return s;
}

StageSet build_stage(const ConstructionPlan& plan, int threads) {
  return build_stage(plan, build_translation_table(plan, threads));
}

std::vector<double> StageSet::tangent_points() const {
  std::vector<double> xs;
  for (int j = 1; j <= plan.step_count(); ++j) xs.push_back(plan.x_j(j));
  return xs;
}

std::string StageSet::parent_path(std::uint64_t n) const {
  if (m_sequence.size() <= 1) return std::to_string(n);
  std::vector<std::uint64_t> parts(m_sequence.size());
  for (std::size_t k = m_sequence.size(); k-- > 0;) {
    int b = m_sequence[k];
    parts[k] = n & ((std::uint64_t(1) << b) - 1);
    n >>= b;
  }
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out += '/';
    out += std::to_string(parts[k]);
  }
  return out;
}

}  // namespace kakeya
