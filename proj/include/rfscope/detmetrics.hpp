#ifndef RFSCOPE_DETMETRICS_HPP
#define RFSCOPE_DETMETRICS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rfscope/errors.hpp"

namespace rfscope {

struct Box {
    double x_min = 0, y_min = 0, x_max = 0, y_max = 0;

    bool operator==(const Box&) const = default;
};

struct DetectionRecord {
    std::string image_id;
    std::string class_label;
    double score = 0; // in [0, 1]
    Box box;

    bool operator==(const DetectionRecord&) const = default;
};

struct GroundTruthRecord {
    std::string image_id;
    std::string class_label;
    Box box;

    bool operator==(const GroundTruthRecord&) const = default;
};

/// Precision-recall integration rule for per-class AP.
enum class ApInterpolation {
    all_point,   // monotone precision envelope, exact rectangle integration
    eleven_point // mean of envelope precision at recalls 0, 0.1, ..., 1
};

struct EvalReport {
    // Operating point at conf_threshold.
    double precision = 0;
    double recall = 0;
    double f1 = 0;
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;

    std::map<std::string, double> per_class_ap; // classes with >= 1 ground truth
    double map50 = 0;

    // Best-F1 operating point over all candidate score thresholds.
    double best_f1 = 0;
    double best_f1_conf = 0;
    double best_f1_precision = 0;
    double best_f1_recall = 0;

    double conf_threshold = 0.25;
    double iou_threshold = 0.5;

    std::vector<std::string> warnings;
};

/// Intersection over union of two axis-aligned boxes; 0 when disjoint.
double iou(const Box& a, const Box& b);

/// Greedy score-ordered matching per (image, class): each detection takes the
/// unmatched ground truth with the highest IoU >= iou_threshold (IoU ties by
/// ground-truth input order). Precision/recall/F1 and tp/fp/fn are counted
/// over detections with score >= conf_threshold; per-class AP integrates the
/// full score-ranked list.
EvalReport evaluate(const std::vector<GroundTruthRecord>& gts,
                    const std::vector<DetectionRecord>& dets,
                    double iou_threshold = 0.5, double conf_threshold = 0.25,
                    ApInterpolation interp = ApInterpolation::all_point);

/// CSV loaders; headers are image_id,class,x_min,y_min,x_max,y_max for ground
/// truth and image_id,class,score,x_min,y_min,x_max,y_max for detections.
/// Malformed rows throw with the offending row number.
std::vector<GroundTruthRecord> load_ground_truth(std::string_view text);
std::vector<DetectionRecord> load_detections(std::string_view text);

std::string serialize_ground_truth(const std::vector<GroundTruthRecord>& records);
std::string serialize_detections(const std::vector<DetectionRecord>& records);

/// Report CSV: a metric,value block followed by a class,ap50 block.
std::string report_csv(const EvalReport& report);

} // namespace rfscope

#endif
