#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kakeya/construction.hpp"
#include "kakeya/interval.hpp"

namespace kakeya {

// Anything that can report vertical slices of its delta-thickening.
// Implementations are immutable and may be queried from several threads.
class SliceSource {
 public:
  virtual ~SliceSource() = default;
  virtual Interval x_window() const = 0;
  virtual const CurveFamily& family() const = 0;
  // Unmerged slice intervals at x, appended to out. No window check.
  virtual void raw_intervals(double x, double delta,
                             std::vector<Interval>& out) const = 0;
  // Streams the same intervals as raw_intervals without buffering them.
  virtual void visit_intervals(double x, double delta,
                               const std::function<void(double, double)>& fn) const;
  // Union length at x; engines may override with a faster path.
  virtual double slice_length(double x, double delta) const;
  virtual std::string engine() const = 0;
  // Index of the rect whose aperture interval holds a, with its translation,
  // if the source can produce it.
  virtual std::optional<CurvedRect> witness_rect(double a) const = 0;
  // Exact rect membership for (X, Y) against all rects, if supported.
  virtual bool supports_full_membership() const { return false; }

  // Merged slice; throws DomainError when x0 is outside the window.
  SliceProfile slice(double x0, double delta) const;
};

// Exact per-column sort-sweep over a materialized StageSet.
class ExactSlicer : public SliceSource {
 public:
  explicit ExactSlicer(const StageSet& stage) : stage_(stage) {}
  Interval x_window() const override { return stage_.x_window; }
  const CurveFamily& family() const override { return stage_.family(); }
  void raw_intervals(double x, double delta,
                     std::vector<Interval>& out) const override;
  void visit_intervals(double x, double delta,
                       const std::function<void(double, double)>& fn) const override;
  // Bottom-up pairwise union of index-ordered runs; neighbouring indices
  // overlap heavily so runs collapse early. Exact for any rect order.
  double slice_length(double x, double delta) const override;
  std::string engine() const override { return "exact"; }
  std::optional<CurvedRect> witness_rect(double a) const override;
  bool supports_full_membership() const override { return true; }
  const StageSet& stage() const { return stage_; }

 private:
  const StageSet& stage_;
};

// One tangency-compressed block: an F_M built with (a0, delta0, M) in its own
// coordinates, then translated by (shift_u, shift_v).
struct BlockSpec {
  double a0 = 1.0;
  double delta0 = 1.0;
  int M = 16;
  int steps = -1;
  double tangent_lo = 0.0, tangent_hi = 1.0;
  double shift_u = 0.0, shift_v = 0.0;
  std::uint64_t first_index = 0;  // global index of the block's rect 0
};

// Group-recursive slice engine for stages too large to materialize.
//
// Per column it rebuilds the union of one top-level group relative to the
// group leader's bottom curve, level by level: the upper half-group is the
// lower one moved by the level's tangency translation, first order in that
// (tiny) translation. Top-level groups are then stacked at their leader
// offsets. Groups are split into aperture buckets with their own
// representative translations; within a bucket the stack length is
// periodic after c+1 copies, adjacent buckets are joined by
// inclusion-exclusion over their touching tails.
class BlockStage : public SliceSource {
 public:
  BlockStage(CurveFamily family, Interval window, std::vector<BlockSpec> blocks,
             int buckets = 16);

  static BlockStage from_plan(const ConstructionPlan& plan, int buckets = 16);

  Interval x_window() const override { return window_; }
  const CurveFamily& family() const override { return family_; }
  void raw_intervals(double x, double delta,
                     std::vector<Interval>& out) const override;
  double slice_length(double x, double delta) const override;
  std::string engine() const override { return "hierarchical"; }
  std::optional<CurvedRect> witness_rect(double a) const override;

  const std::vector<BlockSpec>& blocks() const { return blocks_; }
  std::uint64_t rect_count() const;

 private:
  struct Level {
    double u, v, a, a_tilde;
  };
  struct Bucket {
    std::uint64_t first_group = 0, groups = 0;
    std::vector<Level> levels;
  };
  struct Prepared {
    BlockSpec spec;
    ConstructionPlan plan;
    double h = 0.0;
    int steps = 0;
    std::uint64_t G = 0;  // top-level groups
    std::vector<Bucket> buckets;
  };
  struct SInt {
    double lo, hi, dlo, dhi;
  };

  void group_profile(const Prepared& b, const Bucket& k, double x, double delta,
                     std::vector<SInt>& R, std::vector<SInt>& tmp) const;
  double block_length(const Prepared& b, double x, double delta) const;
  void block_intervals(const Prepared& b, double x, double delta,
                       std::vector<Interval>& out) const;

  CurveFamily family_;
  Interval window_;
  std::vector<BlockSpec> blocks_;
  std::vector<Prepared> prep_;
};

struct MeasureReport {
  double delta = 0.0;
  int columns = 0;
  double measure = 0.0;
  std::vector<std::pair<double, double>> per_column;  // (x0, length)
  double scaled = 0.0;  // measure * M^2 / delta0
  Interval window{0.0, 0.0};
  std::string engine;
};

SliceProfile slice(const StageSet& stage, double x0, double delta);

// Midpoint rule over `columns` uniform columns of the source window.
// Columns run concurrently; the reduction is in column order.
MeasureReport measure_stage(const SliceSource& source, double delta, int columns,
                            int threads = 1, bool keep_per_column = false,
                            int scale_M = 0, double scale_delta0 = 1.0);
MeasureReport measure_stage(const StageSet& stage, double delta, int columns,
                            int threads = 1, bool keep_per_column = false);

struct GroupExtent {
  double max_extent = 0.0;
  std::uint64_t leader = 0;
  std::uint64_t groups = 0;
};

// Groups are rect indices sharing n - (n mod 2^j); extent is max top minus
// min bottom of the group's (unthickened) slices at x0.
GroupExtent group_thickness(const StageSet& stage, double x0, int j);

}  // namespace kakeya
