#ifndef RFSCOPE_ALIGNER_HPP
#define RFSCOPE_ALIGNER_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rfscope/errors.hpp"

namespace rfscope {

struct BoxRecord {
    std::string image_id;
    std::string class_label;
    double x_min = 0, y_min = 0, x_max = 0, y_max = 0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }

    bool operator==(const BoxRecord&) const = default;
};

/// Mean sizes of the smallest 5%, all, and largest 2% of boxes.
struct AnchorStats {
    double tiny = 0;
    double mean = 0;
    double large = 0;
    std::int64_t count = 0;
};

struct AlignConfig {
    double lambda = 4.0;
    int input_size = 640;
    int native_size = 2048; // annotation coordinate frame

    double scale() const { return static_cast<double>(input_size) / native_size; }
};

/// Per-stage receptive-field targets derived from the anchor statistics.
struct RFTargets {
    double p1 = 0, p2 = 0, p3 = 0, p4 = 0, p5 = 0;

    std::array<double, 5> as_array() const { return {p1, p2, p3, p4, p5}; }
};

struct AlignmentResult {
    std::array<int, 5> block_counts{};
    std::array<std::int64_t, 5> achieved_rf{};
    RFTargets targets;
    double objective = 0; // sum of |achieved - target|
};

/// Scalar reduction of a box to one size value.
enum class SizeMetric {
    longest_side,  // max(width, height)
    geometric_mean // sqrt(width * height)
};

/// Parses the annotation CSV (header image_id,class,x_min,y_min,x_max,y_max).
/// Malformed rows throw with the offending row number.
std::vector<BoxRecord> load_annotations(std::string_view text);

std::string serialize_annotations(const std::vector<BoxRecord>& boxes);

/// Box sizes under `metric`, multiplied by `scale`, in input order.
std::vector<double> box_sizes(const std::vector<BoxRecord>& boxes, double scale,
                              SizeMetric metric = SizeMetric::longest_side);

/// tiny = mean of the smallest ceil(5% N) sizes, large = mean of the largest
/// ceil(2% N), mean over all. Throws ValidationError on an empty list.
AnchorStats anchor_stats(const std::vector<BoxRecord>& boxes, double scale,
                         SizeMetric metric = SizeMetric::longest_side);

/// Stage targets: p1 = l*tiny, p2 = l*(tiny+mean), p3 = l*mean,
/// p4 = l*(mean+large), p5 = l*ln(large). Throws when large <= 1 since
/// the log target must stay positive.
RFTargets rf_targets(const AnchorStats& stats, const AlignConfig& cfg);

/// Exhaustive search over block counts in [0, n_max]^5 minimizing the sum of
/// absolute target deviations; ties prefer fewer total blocks, then the
/// lexicographically smaller tuple.
AlignmentResult search_blocks(const RFTargets& targets, int input_size,
                              int n_max = 8);

/// CSV with header "stage,target_rf,achieved_rf,blocks", LF endings.
std::string alignment_report_csv(const AlignmentResult& result);

} // namespace rfscope

#endif
