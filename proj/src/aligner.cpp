#include "rfscope/aligner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rfscope/rf_engine.hpp"
#include "csv_detail.hpp"

namespace rfscope {

namespace {

constexpr std::string_view kHeader = "image_id,class,x_min,y_min,x_max,y_max";

double mean_of(const double* first, std::size_t n) {
    return std::accumulate(first, first + n, 0.0) / static_cast<double>(n);
}

} // namespace

std::vector<BoxRecord> load_annotations(std::string_view text) {
    std::vector<BoxRecord> boxes;
    for (const detail::CsvRow& row : detail::parse_csv(text, kHeader)) {
        BoxRecord box;
        box.image_id = row.fields[0];
        box.class_label = row.fields[1];
        box.x_min = detail::parse_double_field(row.fields[2], "x_min", row.number);
        box.y_min = detail::parse_double_field(row.fields[3], "y_min", row.number);
        box.x_max = detail::parse_double_field(row.fields[4], "x_max", row.number);
        box.y_max = detail::parse_double_field(row.fields[5], "y_max", row.number);
        if (!(box.x_max > box.x_min) || !(box.y_max > box.y_min))
            throw ValidationError("row " + std::to_string(row.number) +
                                  ": inverted or empty box");
        boxes.push_back(std::move(box));
    }
    return boxes;
}

std::string serialize_annotations(const std::vector<BoxRecord>& boxes) {
    std::string out(kHeader);
    out += '\n';
    for (const BoxRecord& b : boxes) {
        out += b.image_id + ',' + b.class_label + ',' + detail::format_double(b.x_min) +
               ',' + detail::format_double(b.y_min) + ',' + detail::format_double(b.x_max) +
               ',' + detail::format_double(b.y_max) + '\n';
    }
    return out;
}

std::vector<double> box_sizes(const std::vector<BoxRecord>& boxes, double scale,
                              SizeMetric metric) {
    std::vector<double> sizes;
    sizes.reserve(boxes.size());
    for (const BoxRecord& b : boxes) {
        const double raw = metric == SizeMetric::longest_side
                               ? std::max(b.width(), b.height())
                               : std::sqrt(b.width() * b.height());
        sizes.push_back(raw * scale);
    }
    return sizes;
}

AnchorStats anchor_stats(const std::vector<BoxRecord>& boxes, double scale,
                         SizeMetric metric) {
    if (boxes.empty())
        throw ValidationError("anchor statistics need at least one box");
    if (!(scale > 0))
        throw ValidationError("scale must be positive");

    std::vector<double> sizes = box_sizes(boxes, scale, metric);
    std::sort(sizes.begin(), sizes.end());

    const std::size_t n = sizes.size();
    const std::size_t n_tiny = (5 * n + 99) / 100;  // ceil(0.05 n), >= 1
    const std::size_t n_large = (2 * n + 99) / 100; // ceil(0.02 n), >= 1

    AnchorStats stats;
    stats.count = static_cast<std::int64_t>(n);
    stats.tiny = mean_of(sizes.data(), n_tiny);
    stats.mean = mean_of(sizes.data(), n);
    stats.large = mean_of(sizes.data() + (n - n_large), n_large);
    return stats;
}

RFTargets rf_targets(const AnchorStats& stats, const AlignConfig& cfg) {
    if (stats.count < 1)
        throw ValidationError("anchor statistics are empty");
    if (!(cfg.lambda > 0))
        throw ValidationError("lambda must be positive");
    if (!(stats.large > 1))
        throw ValidationError("anchor_large must exceed 1 pixel: the log-scale "
                              "P5 target would not be positive");

    RFTargets t;
    t.p1 = cfg.lambda * stats.tiny;
    t.p2 = cfg.lambda * (stats.tiny + stats.mean);
    t.p3 = cfg.lambda * stats.mean;
    t.p4 = cfg.lambda * (stats.mean + stats.large);
    t.p5 = cfg.lambda * std::log(stats.large);
    return t;
}

AlignmentResult search_blocks(const RFTargets& targets, int input_size, int n_max) {
    if (n_max < 0 || n_max > 16)
        throw ValidationError("n_max must lie in [0, 16]");

    const std::array<double, 5> wanted = targets.as_array();

    AlignmentResult best;
    best.targets = targets;
    bool have_best = false;
    int best_sum = 0;

    std::array<int, 5> counts{};
    for (counts[0] = 0; counts[0] <= n_max; ++counts[0])
    for (counts[1] = 0; counts[1] <= n_max; ++counts[1])
    for (counts[2] = 0; counts[2] <= n_max; ++counts[2])
    for (counts[3] = 0; counts[3] <= n_max; ++counts[3])
    for (counts[4] = 0; counts[4] <= n_max; ++counts[4]) {
        const NetworkSpec spec = build_backbone(BackboneParams{counts, input_size});
        const std::vector<StageReport> stages = stage_table(spec);

        std::array<std::int64_t, 5> achieved{};
        double objective = 0;
        for (std::size_t i = 0; i < 5; ++i) {
            achieved[i] = stages[i].rf;
            objective += std::abs(static_cast<double>(achieved[i]) - wanted[i]);
        }
        const int sum = std::accumulate(counts.begin(), counts.end(), 0);

        // Ties prefer fewer blocks, then the lexicographically smaller tuple;
        // the loop emits tuples in ascending order, so "first wins" covers it.
        const bool better =
            !have_best || objective < best.objective ||
            (objective == best.objective &&
             (sum < best_sum || (sum == best_sum && counts < best.block_counts)));
        if (better) {
            best.block_counts = counts;
            best.achieved_rf = achieved;
            best.objective = objective;
            best_sum = sum;
            have_best = true;
        }
    }
    return best;
}

std::string alignment_report_csv(const AlignmentResult& result) {
    const std::array<double, 5> targets = result.targets.as_array();
    std::string out = "stage,target_rf,achieved_rf,blocks\n";
    for (std::size_t i = 0; i < 5; ++i) {
        out += "P" + std::to_string(i + 1) + ',' + detail::format_double(targets[i]) + ',' +
               std::to_string(result.achieved_rf[i]) + ',' +
               std::to_string(result.block_counts[i]) + '\n';
    }
    return out;
}

} // namespace rfscope
