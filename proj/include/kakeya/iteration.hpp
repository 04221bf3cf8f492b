#pragma once

#include <cstdint>
#include <vector>

#include "kakeya/construction.hpp"
#include "kakeya/measure.hpp"

namespace kakeya {

struct IterationPlan {
  CurveFamily family;
  double a0 = 1.0;
  double delta0 = 1.0;
  std::vector<int> m_sequence;  // (M1, ..., Md); at least depth entries
  int depth = 1;
  std::uint64_t rect_budget = std::uint64_t(1) << 24;
  bool diagnostic = false;  // no cutoff: window [0,1]
  // Children place their tangency abscissae inside the parent window
  // [start, 1] instead of over [0,1]. start < 0 means the parent's window.
  bool rescaled = false;
  double rescale_start = -1.0;
};

// A_d = 1 - prod_{l<=d} (1 - 4 log2(M_l) / M_l)
double iterated_window_start(const std::vector<int>& m_sequence, int depth);

// Throws ConfigError / SizeError.
void validate_iteration(const IterationPlan& plan);

// Materialized depth-d set with 2^(M1+...+Md) rects.
StageSet build_iterated(const IterationPlan& plan, int threads = 1);

// Depth-d set kept virtual: depth d-1 is materialized and each of its rects
// becomes one hierarchical block of the last level. Only the depth d-1
// count is charged against the budget.
BlockStage iterated_blocks(const IterationPlan& plan, int threads = 1,
                           int buckets = 16);

// Child plan used inside one parent rect at the given level (2-based).
ConstructionPlan child_plan(const IterationPlan& plan, const CurvedRect& parent,
                            int level, const Interval& parent_window);

struct NestingResult {
  bool contained = false;
  double worst_violation = 0.0;  // largest uncovered length of an inner interval
  double worst_x = 0.0;
  int columns = 0;
  std::uint64_t intervals_checked = 0;
};

// Checks, column by column, that every inner interval (thickened by
// delta_inner) lies inside the merged outer slice (thickened by
// delta_outer), up to `slack`.
NestingResult nesting_check(const SliceSource& outer, const SliceSource& inner,
                            double delta_outer, double delta_inner, int columns,
                            int threads = 1, double slack = 1e-12);

}  // namespace kakeya
