#include "rfscope/detmetrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>

#include "csv_detail.hpp"

namespace rfscope {

namespace {

constexpr std::string_view kGtHeader = "image_id,class,x_min,y_min,x_max,y_max";
constexpr std::string_view kDetHeader = "image_id,class,score,x_min,y_min,x_max,y_max";

void validate_box(const Box& box, const std::string& where) {
    if (!(box.x_max > box.x_min) || !(box.y_max > box.y_min))
        throw ValidationError(where + ": inverted or empty box");
}

// Exact fraction arithmetic for the precision-recall integration. Falls back
// to doubles only if a reduced term no longer fits in 64 bits.
struct Ratio {
    std::int64_t num = 0;
    std::int64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

__int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a < 0 ? -a : a;
}

std::optional<Ratio> make_ratio(__int128 num, __int128 den) {
    if (den == 0)
        return std::nullopt;
    const __int128 g = gcd128(num, den);
    if (g != 0) {
        num /= g;
        den /= g;
    }
    constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
    if (num > kMax || num < -kMax || den > kMax)
        return std::nullopt;
    return Ratio{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

bool ratio_less(const Ratio& a, const Ratio& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

std::optional<Ratio> ratio_add(const Ratio& a, const Ratio& b) {
    const __int128 num =
        static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den;
    return make_ratio(num, static_cast<__int128>(a.den) * b.den);
}

double f1_score(double precision, double recall) {
    return precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
}

/// Average precision over one class's score-ranked tp flags.
double average_precision(const std::vector<bool>& is_tp, std::int64_t gt_count,
                         ApInterpolation interp) {
    const std::size_t m = is_tp.size();
    if (gt_count < 1)
        return 0.0;
    if (m == 0)
        return 0.0;

    std::vector<std::int64_t> cum_tp(m);
    std::int64_t running = 0;
    for (std::size_t i = 0; i < m; ++i) {
        running += is_tp[i] ? 1 : 0;
        cum_tp[i] = running;
    }

    // Monotone precision envelope from the right, kept as exact fractions.
    std::vector<Ratio> envelope(m);
    Ratio best{0, 1};
    for (std::size_t i = m; i-- > 0;) {
        const Ratio precision{cum_tp[i], static_cast<std::int64_t>(i + 1)};
        if (ratio_less(best, precision))
            best = precision;
        envelope[i] = best;
    }

    std::optional<Ratio> exact = Ratio{0, 1};
    double approx = 0;

    if (interp == ApInterpolation::all_point) {
        // Recall steps by 1/gt_count exactly at TP ranks.
        for (std::size_t i = 0; i < m; ++i) {
            if (!is_tp[i])
                continue;
            approx += envelope[i].value();
            if (exact)
                exact = ratio_add(*exact, envelope[i]);
        }
        approx /= static_cast<double>(gt_count);
        if (exact)
            exact = make_ratio(exact->num, static_cast<__int128>(exact->den) * gt_count);
    } else {
        // Envelope precision sampled at recalls 0, 0.1, ..., 1.
        for (int tenth = 0; tenth <= 10; ++tenth) {
            // recall_i >= tenth/10  <=>  10*cum_tp_i >= tenth*gt_count
            std::size_t i = 0;
            while (i < m && 10 * cum_tp[i] < static_cast<std::int64_t>(tenth) * gt_count)
                ++i;
            if (i == m) {
                if (tenth == 0) { // recall 0 is always reached
                    approx += envelope[0].value();
                    if (exact)
                        exact = ratio_add(*exact, envelope[0]);
                }
                continue;
            }
            approx += envelope[i].value();
            if (exact)
                exact = ratio_add(*exact, envelope[i]);
        }
        approx /= 11.0;
        if (exact)
            exact = make_ratio(exact->num, static_cast<__int128>(exact->den) * 11);
    }

    return exact ? exact->value() : approx;
}

} // namespace

double iou(const Box& a, const Box& b) {
    validate_box(a, "iou");
    validate_box(b, "iou");
    const double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    const double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    if (ix <= 0 || iy <= 0)
        return 0.0;
    const double intersection = ix * iy;
    const double area_a = (a.x_max - a.x_min) * (a.y_max - a.y_min);
    const double area_b = (b.x_max - b.x_min) * (b.y_max - b.y_min);
    return intersection / (area_a + area_b - intersection);
}

EvalReport evaluate(const std::vector<GroundTruthRecord>& gts,
                    const std::vector<DetectionRecord>& dets, double iou_threshold,
                    double conf_threshold, ApInterpolation interp) {
    if (!(iou_threshold > 0) || iou_threshold > 1)
        throw ValidationError("iou threshold must lie in (0, 1]");
    for (std::size_t i = 0; i < dets.size(); ++i) {
        validate_box(dets[i].box, "detection " + std::to_string(i));
        if (dets[i].score < 0 || dets[i].score > 1)
            throw ValidationError("detection " + std::to_string(i) + ": score out of [0, 1]");
    }
    for (std::size_t i = 0; i < gts.size(); ++i)
        validate_box(gts[i].box, "ground truth " + std::to_string(i));

    using GroupKey = std::pair<std::string, std::string>; // (image, class)
    struct Group {
        std::vector<std::size_t> gt_indices;
        std::vector<std::size_t> det_indices;
    };
    std::map<GroupKey, Group> groups;
    for (std::size_t i = 0; i < gts.size(); ++i)
        groups[{gts[i].image_id, gts[i].class_label}].gt_indices.push_back(i);
    for (std::size_t i = 0; i < dets.size(); ++i)
        groups[{dets[i].image_id, dets[i].class_label}].det_indices.push_back(i);

    // Greedy matching per (image, class), in descending score order.
    std::vector<bool> det_is_tp(dets.size(), false);
    for (auto& [key, group] : groups) {
        (void)key;
        std::sort(group.det_indices.begin(), group.det_indices.end(),
                  [&](std::size_t a, std::size_t b) {
                      if (dets[a].score != dets[b].score)
                          return dets[a].score > dets[b].score;
                      return a < b;
                  });
        std::vector<bool> gt_taken(group.gt_indices.size(), false);
        for (std::size_t det_index : group.det_indices) {
            double best_iou = 0;
            std::size_t best_gt = group.gt_indices.size();
            for (std::size_t g = 0; g < group.gt_indices.size(); ++g) {
                if (gt_taken[g])
                    continue;
                const double overlap = iou(dets[det_index].box, gts[group.gt_indices[g]].box);
                if (overlap >= iou_threshold && overlap > best_iou) {
                    best_iou = overlap;
                    best_gt = g; // IoU ties keep the earlier ground truth
                }
            }
            if (best_gt < group.gt_indices.size()) {
                gt_taken[best_gt] = true;
                det_is_tp[det_index] = true;
            }
        }
    }

    EvalReport report;
    report.conf_threshold = conf_threshold;
    report.iou_threshold = iou_threshold;

    // Operating point at the fixed confidence threshold.
    std::int64_t kept = 0;
    for (std::size_t i = 0; i < dets.size(); ++i) {
        if (dets[i].score < conf_threshold)
            continue;
        ++kept;
        if (det_is_tp[i])
            ++report.tp;
    }
    report.fp = kept - report.tp;
    report.fn = static_cast<std::int64_t>(gts.size()) - report.tp;
    report.precision = kept > 0 ? static_cast<double>(report.tp) / static_cast<double>(kept) : 0.0;
    report.recall =
        !gts.empty() ? static_cast<double>(report.tp) / static_cast<double>(gts.size()) : 0.0;
    report.f1 = f1_score(report.precision, report.recall);

    // Per-class AP over the full ranked list.
    std::map<std::string, std::int64_t> gt_per_class;
    for (const GroundTruthRecord& gt : gts)
        ++gt_per_class[gt.class_label];

    std::map<std::string, std::vector<std::size_t>> dets_per_class;
    for (std::size_t i = 0; i < dets.size(); ++i)
        dets_per_class[dets[i].class_label].push_back(i);

    for (const auto& [class_label, indices] : dets_per_class) {
        if (!gt_per_class.count(class_label))
            report.warnings.push_back("class \"" + class_label + "\" has no ground truth; " +
                                      std::to_string(indices.size()) +
                                      " detection(s) counted as false positives");
    }

    for (const auto& [class_label, gt_count] : gt_per_class) {
        std::vector<std::size_t> ranked;
        if (auto it = dets_per_class.find(class_label); it != dets_per_class.end())
            ranked = it->second;
        std::sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
            if (dets[a].score != dets[b].score)
                return dets[a].score > dets[b].score;
            return a < b;
        });
        std::vector<bool> flags;
        flags.reserve(ranked.size());
        for (std::size_t index : ranked)
            flags.push_back(det_is_tp[index]);
        report.per_class_ap[class_label] = average_precision(flags, gt_count, interp);
    }

    if (!report.per_class_ap.empty()) {
        double sum = 0;
        for (const auto& [class_label, ap] : report.per_class_ap) {
            (void)class_label;
            sum += ap;
        }
        report.map50 = sum / static_cast<double>(report.per_class_ap.size());
    }

    // Best-F1 operating point: scan prefixes of the global ranking, cutting
    // only at distinct score values.
    std::vector<std::size_t> global_rank(dets.size());
    std::iota(global_rank.begin(), global_rank.end(), std::size_t{0});
    std::sort(global_rank.begin(), global_rank.end(), [&](std::size_t a, std::size_t b) {
        if (dets[a].score != dets[b].score)
            return dets[a].score > dets[b].score;
        return a < b;
    });
    std::int64_t prefix_tp = 0;
    for (std::size_t i = 0; i < global_rank.size(); ++i) {
        if (det_is_tp[global_rank[i]])
            ++prefix_tp;
        const bool score_boundary = i + 1 == global_rank.size() ||
                                    dets[global_rank[i + 1]].score != dets[global_rank[i]].score;
        if (!score_boundary)
            continue;
        const double precision = static_cast<double>(prefix_tp) / static_cast<double>(i + 1);
        const double recall =
            !gts.empty() ? static_cast<double>(prefix_tp) / static_cast<double>(gts.size()) : 0.0;
        const double f1 = f1_score(precision, recall);
        if (f1 > report.best_f1) {
            report.best_f1 = f1;
            report.best_f1_conf = dets[global_rank[i]].score;
            report.best_f1_precision = precision;
            report.best_f1_recall = recall;
        }
    }

    return report;
}

std::vector<GroundTruthRecord> load_ground_truth(std::string_view text) {
    std::vector<GroundTruthRecord> records;
    for (const detail::CsvRow& row : detail::parse_csv(text, kGtHeader)) {
        GroundTruthRecord record;
        record.image_id = row.fields[0];
        record.class_label = row.fields[1];
        record.box.x_min = detail::parse_double_field(row.fields[2], "x_min", row.number);
        record.box.y_min = detail::parse_double_field(row.fields[3], "y_min", row.number);
        record.box.x_max = detail::parse_double_field(row.fields[4], "x_max", row.number);
        record.box.y_max = detail::parse_double_field(row.fields[5], "y_max", row.number);
        if (!(record.box.x_max > record.box.x_min) || !(record.box.y_max > record.box.y_min))
            throw ValidationError("row " + std::to_string(row.number) +
                                  ": inverted or empty box");
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<DetectionRecord> load_detections(std::string_view text) {
    std::vector<DetectionRecord> records;
    for (const detail::CsvRow& row : detail::parse_csv(text, kDetHeader)) {
        DetectionRecord record;
        record.image_id = row.fields[0];
        record.class_label = row.fields[1];
        record.score = detail::parse_double_field(row.fields[2], "score", row.number);
        if (record.score < 0 || record.score > 1)
            throw ValidationError("row " + std::to_string(row.number) +
                                  ": score out of [0, 1]");
        record.box.x_min = detail::parse_double_field(row.fields[3], "x_min", row.number);
        record.box.y_min = detail::parse_double_field(row.fields[4], "y_min", row.number);
        record.box.x_max = detail::parse_double_field(row.fields[5], "x_max", row.number);
        record.box.y_max = detail::parse_double_field(row.fields[6], "y_max", row.number);
        if (!(record.box.x_max > record.box.x_min) || !(record.box.y_max > record.box.y_min))
            throw ValidationError("row " + std::to_string(row.number) +
                                  ": inverted or empty box");
        records.push_back(std::move(record));
    }
    return records;
}

std::string serialize_ground_truth(const std::vector<GroundTruthRecord>& records) {
    std::string out(kGtHeader);
    out += '\n';
    for (const GroundTruthRecord& r : records) {
        out += r.image_id + ',' + r.class_label + ',' + detail::format_double(r.box.x_min) +
               ',' + detail::format_double(r.box.y_min) + ',' +
               detail::format_double(r.box.x_max) + ',' + detail::format_double(r.box.y_max) +
               '\n';
    }
    return out;
}

std::string serialize_detections(const std::vector<DetectionRecord>& records) {
    std::string out(kDetHeader);
    out += '\n';
    for (const DetectionRecord& r : records) {
        out += r.image_id + ',' + r.class_label + ',' + detail::format_double(r.score) + ',' +
               detail::format_double(r.box.x_min) + ',' + detail::format_double(r.box.y_min) +
               ',' + detail::format_double(r.box.x_max) + ',' +
               detail::format_double(r.box.y_max) + '\n';
    }
    return out;
}

std::string report_csv(const EvalReport& report) {
    using detail::format_double;
    std::string out = "metric,value\n";
    out += "precision," + format_double(report.precision) + '\n';
    out += "recall," + format_double(report.recall) + '\n';
    out += "f1," + format_double(report.f1) + '\n';
    out += "tp," + std::to_string(report.tp) + '\n';
    out += "fp," + std::to_string(report.fp) + '\n';
    out += "fn," + std::to_string(report.fn) + '\n';
    out += "map50," + format_double(report.map50) + '\n';
    out += "conf_threshold," + format_double(report.conf_threshold) + '\n';
    out += "iou_threshold," + format_double(report.iou_threshold) + '\n';
    out += "best_f1," + format_double(report.best_f1) + '\n';
    out += "best_f1_conf," + format_double(report.best_f1_conf) + '\n';
    out += "best_f1_precision," + format_double(report.best_f1_precision) + '\n';
    out += "best_f1_recall," + format_double(report.best_f1_recall) + '\n';
    out += "\nclass,ap50\n";
    for (const auto& [class_label, ap] : report.per_class_ap)
        out += class_label + ',' + format_double(ap) + '\n';
    return out;
}

} // namespace rfscope
