// Independent reference implementations used to cross-check the library.
// They deliberately use different algorithms from the production code:
// odometer-style tap enumeration instead of iterated convolution, and full
// matching-space search instead of greedy assignment.

#ifndef RFSCOPE_TESTS_ORACLES_HPP
#define RFSCOPE_TESTS_ORACLES_HPP

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "rfscope/archspec.hpp"
#include "rfscope/detmetrics.hpp"

namespace oracles {

/// Tap-path counts by brute force: one (tx, ty) tap choice per layer, all
/// combinations enumerated, offset sums accumulated. Keyed by (x, y).
std::map<std::pair<int, int>, std::int64_t>
brute_force_map(const std::vector<rfscope::LayerSpec>& layers);

/// Matched detection flags by brute force: every injective IoU-feasible
/// detection-to-ground-truth matching is enumerated and the best one under
/// the score-ordered preference (matched beats unmatched, then higher IoU,
/// then earlier ground truth) is selected. Flags are indexed like `dets`.
std::vector<bool> brute_force_matches(const std::vector<rfscope::GroundTruthRecord>& gts,
                                      const std::vector<rfscope::DetectionRecord>& dets,
                                      double iou_threshold);

} // namespace oracles

#endif
