#pragma once

#include <cstddef>
#include <vector>

namespace kakeya {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

// Merged vertical slice {y : (x0, y) in set} at one abscissa.
struct SliceProfile {
  double x0 = 0.0;
  std::vector<Interval> intervals;  // sorted, disjoint, hi > lo
  double total_length = 0.0;
};

// Canonical sorted disjoint union. Touching intervals are joined and
// zero-length pieces dropped. Throws DataError on non-finite or reversed input.
std::vector<Interval> merge_intervals(std::vector<Interval> raw);

// Union length without materializing the merged list. Sorts `raw` in place.
double union_length(std::vector<Interval>& raw);

// Union length of data split into runs [runs[i], runs[i+1]), each sorted by
// lo. Runs are merged pairwise bottom-up; data is scratch afterwards.
double union_length_of_runs(std::vector<Interval>& data,
                            std::vector<std::size_t>& runs);

double total_length(const std::vector<Interval>& merged);

}  // namespace kakeya
