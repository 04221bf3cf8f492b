#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kakeya/curve_family.hpp"
#include "kakeya/interval.hpp"
#include "kakeya/tangency.hpp"

namespace kakeya {

struct ConstructionPlan {
  CurveFamily family;
  double a0 = 1.0;
  double delta0 = 1.0;
  int M = 16;
  // Number of tangency steps; -1 means the standard m-1. Only the
  // diagnostic mode may override it.
  int steps = -1;
  // No-cutoff mode: window [0,1], any even M >= 2.
  bool diagnostic = false;
  // Interval the tangency abscissae are spread over; x_j = lo + (hi-lo) 2j/M.
  // [0,1] is the native construction, a sub-window gives the rescaled one.
  double tangent_lo = 0.0;
  double tangent_hi = 1.0;

  int m() const { return M / 2; }
  int step_count() const { return steps < 0 ? m() - 1 : steps; }
  double h() const;  // delta0 2^-M
  double aperture(std::uint64_t n) const { return a0 + double(n) * h(); }
  double x_j(int j) const;
  std::uint64_t rect_count() const { return std::uint64_t(1) << M; }
};

// 4 log2(M) / M
double cutoff_start(int M);
// [cutoff_start(M), 1], or [0,1] in diagnostic mode
Interval stage_window(const ConstructionPlan& plan);

// Throws ConfigError naming the failing inequality.
void validate_plan(const ConstructionPlan& plan);

// n - (n mod 2^(j-1)), j >= 1
std::uint64_t binary_floor(std::uint64_t n, int j);
// j-th binary digit of n (j >= 1), i.e. whether step j moves n
inline int epsilon(std::uint64_t n, int j) { return int((n >> (j - 1)) & 1u); }
// step-j leader governing n
inline bool is_leader(std::uint64_t n, int j) {
  return ((n >> (j - 1)) & 1u) && (n & ((std::uint64_t(1) << (j - 1)) - 1)) == 0;
}

// Solution of the step-j system for leader n (n = 2^j k + 2^(j-1)).
TangencySolution step_solution(const ConstructionPlan& plan, int j,
                               std::uint64_t leader);

class TranslationTable {
 public:
  int M = 0;
  int steps = 0;
  // per step j (index j-1): entry k belongs to leader 2^j k + 2^(j-1)
  std::vector<std::vector<double>> u_step, v_step;
  std::vector<double> u_total, v_total;

  double step_u(int j, std::uint64_t leader) const;
  double step_v(int j, std::uint64_t leader) const;
  // U_n^(j), V_n^(j): shift of n after steps 1..j
  double partial_u(std::uint64_t n, int j) const;
  double partial_v(std::uint64_t n, int j) const;
  // sum over j of eps_j(n) * step(j, floor_j(n)), ascending j
  std::pair<double, double> gated_total(std::uint64_t n) const;
  std::uint64_t size() const { return u_total.size(); }
};

// Largest M whose table/stage is materialized.
constexpr int kMaxMaterializedM = 26;

TranslationTable build_translation_table(const ConstructionPlan& plan,
                                         int threads = 1);

// (u_n, v_n) for one index without building the table: steps many solves.
std::pair<double, double> translation_of(const ConstructionPlan& plan,
                                         std::uint64_t n);

struct CurvedRect {
  std::uint64_t index = 0;
  double aperture = 0.0;
  double thickness = 0.0;
  double u = 0.0;
  double v = 0.0;
};

struct StageSet {
  std::vector<CurvedRect> rects;  // ascending index
  Interval x_window{0.0, 1.0};    // shared by every rect
  ConstructionPlan plan;          // top-level plan (family, a0, delta0, M1)
  int depth = 1;
  std::vector<int> m_sequence;    // (M1, ..., Md)
  bool rescaled = false;

  const CurveFamily& family() const { return plan.family; }
  // tangency abscissae of the top-level construction
  std::vector<double> tangent_points() const;
  // "i1/i2/.../id" for rect index n
  std::string parent_path(std::uint64_t n) const;
};

// Largest |u|,|v| over a table, and the ratio to delta0 2^(-M/2).
struct TranslationBounds {
  double max_u = 0.0, max_v = 0.0;
  double min_u = 0.0, min_v = 0.0;
  double C_u = 0.0, C_v = 0.0;         // max / (delta0 2^(-M/2))
  double C_partial = 0.0;              // max_{n,j} U_n^(j) / (delta0 2^(j-M))
};
TranslationBounds translation_bounds(const ConstructionPlan& plan,
                                     const TranslationTable& table);

StageSet build_stage(const ConstructionPlan& plan, int threads = 1);
StageSet build_stage(const ConstructionPlan& plan, const TranslationTable& table);

}  // namespace kakeya
