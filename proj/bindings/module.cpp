// Python bindings for the analysis core. The compiled module is private
// (_rfscope); the rfscope package re-exports its contents.

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rfscope/aligner.hpp"
#include "rfscope/archspec.hpp"
#include "rfscope/detmetrics.hpp"
#include "rfscope/errors.hpp"
#include "rfscope/fusion.hpp"
#include "rfscope/gridscope.hpp"
#include "rfscope/rf_engine.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_rfscope, m) {
    m.doc() = "Receptive-field, grid-effect, and detection-metric analyses";

    // Exceptions. Derived classes are registered after the base so their
    // translators take precedence.
    auto& error = py::register_exception<rfscope::Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<rfscope::ParseError>(m, "ParseError", error.ptr());
    py::register_exception<rfscope::ValidationError>(m, "ValidationError", error.ptr());

    // --- Network description -------------------------------------------
    py::enum_<rfscope::LayerKind>(m, "LayerKind").value("conv", rfscope::LayerKind::conv);

    py::class_<rfscope::LayerSpec>(m, "LayerSpec")
        .def(py::init<>())
        .def(py::init([](int kernel, int stride, int dilation, const std::string& label) {
                 rfscope::LayerSpec layer;
                 layer.kernel = kernel;
                 layer.stride = stride;
                 layer.dilation = dilation;
                 layer.label = label;
                 return layer;
             }),
             py::arg("kernel"), py::arg("stride") = 1, py::arg("dilation") = 1,
             py::arg("label") = "")
        .def_readwrite("kind", &rfscope::LayerSpec::kind)
        .def_readwrite("kernel", &rfscope::LayerSpec::kernel)
        .def_readwrite("stride", &rfscope::LayerSpec::stride)
        .def_readwrite("dilation", &rfscope::LayerSpec::dilation)
        .def_readwrite("label", &rfscope::LayerSpec::label)
        .def("effective_kernel", &rfscope::LayerSpec::effective_kernel)
        .def(py::self == py::self)
        .def("__repr__", [](const rfscope::LayerSpec& layer) {
            return "LayerSpec(kernel=" + std::to_string(layer.kernel) +
                   ", stride=" + std::to_string(layer.stride) +
                   ", dilation=" + std::to_string(layer.dilation) + ")";
        });

    py::class_<rfscope::NetworkSpec>(m, "NetworkSpec")
        .def(py::init<>())
        .def_readwrite("layers", &rfscope::NetworkSpec::layers)
        .def_readwrite("stage_marks", &rfscope::NetworkSpec::stage_marks)
        .def_readwrite("input_size", &rfscope::NetworkSpec::input_size)
        .def(py::self == py::self);

    py::class_<rfscope::BackboneParams>(m, "BackboneParams")
        .def(py::init<>())
        .def(py::init([](const std::array<int, 5>& counts, int input_size) {
                 return rfscope::BackboneParams{counts, input_size};
             }),
             py::arg("block_counts"), py::arg("input_size") = 640)
        .def_readwrite("block_counts", &rfscope::BackboneParams::block_counts)
        .def_readwrite("input_size", &rfscope::BackboneParams::input_size);

    m.def("validate", &rfscope::validate, py::arg("spec"));
    m.def("parse_network", &rfscope::parse_network, py::arg("text"));
    m.def("serialize_network", &rfscope::serialize_network, py::arg("spec"));
    m.def("build_backbone", &rfscope::build_backbone, py::arg("params"));

    // --- Receptive-field recursion --------------------------------------
    py::class_<rfscope::RFState>(m, "RFState")
        .def(py::init<>())
        .def_readwrite("rf", &rfscope::RFState::rf)
        .def_readwrite("jump", &rfscope::RFState::jump)
        .def_readwrite("size", &rfscope::RFState::size)
        .def(py::self == py::self)
        .def("__repr__", [](const rfscope::RFState& s) {
            return "RFState(rf=" + std::to_string(s.rf) + ", jump=" + std::to_string(s.jump) +
                   ", size=" + std::to_string(s.size) + ")";
        });

    py::class_<rfscope::StageReport>(m, "StageReport")
        .def(py::init<>())
        .def_readwrite("stage", &rfscope::StageReport::stage)
        .def_readwrite("size", &rfscope::StageReport::size)
        .def_readwrite("rf", &rfscope::StageReport::rf)
        .def_readwrite("jump", &rfscope::StageReport::jump)
        .def(py::self == py::self);

    m.def("propagate", &rfscope::propagate, py::arg("spec"));
    m.def("stage_table", &rfscope::stage_table, py::arg("spec"));
    m.def("stage_table_csv", &rfscope::stage_table_csv, py::arg("reports"));

    // --- Fusion-graph shape inference ------------------------------------
    py::class_<rfscope::TensorShape>(m, "TensorShape")
        .def(py::init<>())
        .def(py::init([](std::int64_t height, std::int64_t width, std::int64_t channels) {
                 return rfscope::TensorShape{height, width, channels};
             }),
             py::arg("height"), py::arg("width"), py::arg("channels"))
        .def_readwrite("height", &rfscope::TensorShape::height)
        .def_readwrite("width", &rfscope::TensorShape::width)
        .def_readwrite("channels", &rfscope::TensorShape::channels)
        .def(py::self == py::self)
        .def("__repr__", [](const rfscope::TensorShape& s) {
            return "TensorShape(" + std::to_string(s.height) + ", " + std::to_string(s.width) +
                   ", " + std::to_string(s.channels) + ")";
        });

    py::enum_<rfscope::FusionOp>(m, "FusionOp")
        .value("source", rfscope::FusionOp::source)
        .value("bilinear_resize", rfscope::FusionOp::bilinear_resize)
        .value("concat", rfscope::FusionOp::concat)
        .value("agrfm_passthrough", rfscope::FusionOp::agrfm_passthrough);

    py::class_<rfscope::FusionNode>(m, "FusionNode")
        .def(py::init<>())
        .def_readwrite("id", &rfscope::FusionNode::id)
        .def_readwrite("op", &rfscope::FusionNode::op)
        .def_readwrite("inputs", &rfscope::FusionNode::inputs)
        .def_readwrite("target_height", &rfscope::FusionNode::target_height)
        .def_readwrite("target_width", &rfscope::FusionNode::target_width)
        .def_readwrite("out_channels", &rfscope::FusionNode::out_channels)
        .def_readwrite("shape", &rfscope::FusionNode::shape);

    py::class_<rfscope::FusionGraph>(m, "FusionGraph")
        .def(py::init<>())
        .def_readwrite("nodes", &rfscope::FusionGraph::nodes)
        .def("node", &rfscope::FusionGraph::node, py::arg("id"),
             py::return_value_policy::reference_internal);

    m.def("infer_shapes", &rfscope::infer_shapes, py::arg("graph"));
    m.def("infer_fusion", &rfscope::infer_fusion, py::arg("stages"), py::arg("channels"));

    // --- Utilization maps and the anti-grid check ------------------------
    py::class_<rfscope::UtilizationMap>(m, "UtilizationMap")
        .def(py::init<>())
        .def_readwrite("counts", &rfscope::UtilizationMap::counts)
        .def_readwrite("half_extent", &rfscope::UtilizationMap::half_extent)
        .def("side", &rfscope::UtilizationMap::side)
        .def("at", &rfscope::UtilizationMap::at, py::arg("x"), py::arg("y"))
        .def(py::self == py::self);

    py::class_<rfscope::GridDiagnostics>(m, "GridDiagnostics")
        .def(py::init<>())
        .def_readwrite("has_interior_zeros", &rfscope::GridDiagnostics::has_interior_zeros)
        .def_readwrite("coverage_ratio", &rfscope::GridDiagnostics::coverage_ratio)
        .def_readwrite("uniformity", &rfscope::GridDiagnostics::uniformity);

    py::class_<rfscope::AntiGridQuery>(m, "AntiGridQuery")
        .def(py::init<>())
        .def(py::init([](const std::vector<int>& pre_stack, int last_kernel,
                         int last_dilation) {
                 return rfscope::AntiGridQuery{pre_stack, last_kernel, last_dilation};
             }),
             py::arg("pre_stack"), py::arg("last_kernel"), py::arg("last_dilation"))
        .def_readwrite("pre_stack", &rfscope::AntiGridQuery::pre_stack)
        .def_readwrite("last_kernel", &rfscope::AntiGridQuery::last_kernel)
        .def_readwrite("last_dilation", &rfscope::AntiGridQuery::last_dilation);

    py::class_<rfscope::AntiGridResult>(m, "AntiGridResult")
        .def(py::init<>())
        .def_readwrite("admissible", &rfscope::AntiGridResult::admissible)
        .def_readwrite("k_prime", &rfscope::AntiGridResult::k_prime)
        .def_readwrite("lhs", &rfscope::AntiGridResult::lhs);

    m.def("utilization_map", &rfscope::utilization_map, py::arg("spec"));
    m.def("diagnostics", &rfscope::diagnostics, py::arg("map"));
    m.def("check_anti_grid", &rfscope::check_anti_grid, py::arg("query"));
    m.def("max_admissible_dilation", &rfscope::max_admissible_dilation, py::arg("pre_stack"),
          py::arg("last_kernel"));
    m.def("build_agrfm_stack", &rfscope::build_agrfm_stack, py::arg("n_standard"),
          py::arg("kernel"), py::arg("dilation"), py::arg("input_size") = 640);
    m.def("map_to_csv", &rfscope::map_to_csv, py::arg("map"));
    m.def("map_to_pgm", &rfscope::map_to_pgm, py::arg("map"));
    m.def("map_to_ascii", &rfscope::map_to_ascii, py::arg("map"));

    // --- Anchor statistics and backbone alignment ------------------------
    py::class_<rfscope::BoxRecord>(m, "BoxRecord")
        .def(py::init<>())
        .def(py::init([](const std::string& image_id, const std::string& class_label,
                         double x_min, double y_min, double x_max, double y_max) {
                 return rfscope::BoxRecord{image_id, class_label, x_min, y_min, x_max, y_max};
             }),
             py::arg("image_id"), py::arg("class_label"), py::arg("x_min"), py::arg("y_min"),
             py::arg("x_max"), py::arg("y_max"))
        .def_readwrite("image_id", &rfscope::BoxRecord::image_id)
        .def_readwrite("class_label", &rfscope::BoxRecord::class_label)
        .def_readwrite("x_min", &rfscope::BoxRecord::x_min)
        .def_readwrite("y_min", &rfscope::BoxRecord::y_min)
        .def_readwrite("x_max", &rfscope::BoxRecord::x_max)
        .def_readwrite("y_max", &rfscope::BoxRecord::y_max)
        .def("width", &rfscope::BoxRecord::width)
        .def("height", &rfscope::BoxRecord::height)
        .def(py::self == py::self);

    py::class_<rfscope::AnchorStats>(m, "AnchorStats")
        .def(py::init<>())
        .def(py::init([](double tiny, double mean, double large, std::int64_t count) {
                 return rfscope::AnchorStats{tiny, mean, large, count};
             }),
             py::arg("tiny"), py::arg("mean"), py::arg("large"), py::arg("count") = 0)
        .def_readwrite("tiny", &rfscope::AnchorStats::tiny)
        .def_readwrite("mean", &rfscope::AnchorStats::mean)
        .def_readwrite("large", &rfscope::AnchorStats::large)
        .def_readwrite("count", &rfscope::AnchorStats::count);

    py::class_<rfscope::AlignConfig>(m, "AlignConfig")
        .def(py::init<>())
        .def_readwrite("lambda_", &rfscope::AlignConfig::lambda)
        .def_readwrite("input_size", &rfscope::AlignConfig::input_size)
        .def_readwrite("native_size", &rfscope::AlignConfig::native_size)
        .def("scale", &rfscope::AlignConfig::scale);

    py::class_<rfscope::RFTargets>(m, "RFTargets")
        .def(py::init<>())
        .def_readwrite("p1", &rfscope::RFTargets::p1)
        .def_readwrite("p2", &rfscope::RFTargets::p2)
        .def_readwrite("p3", &rfscope::RFTargets::p3)
        .def_readwrite("p4", &rfscope::RFTargets::p4)
        .def_readwrite("p5", &rfscope::RFTargets::p5)
        .def("as_array", &rfscope::RFTargets::as_array);

    py::class_<rfscope::AlignmentResult>(m, "AlignmentResult")
        .def(py::init<>())
        .def_readwrite("block_counts", &rfscope::AlignmentResult::block_counts)
        .def_readwrite("achieved_rf", &rfscope::AlignmentResult::achieved_rf)
        .def_readwrite("targets", &rfscope::AlignmentResult::targets)
        .def_readwrite("objective", &rfscope::AlignmentResult::objective);

    py::enum_<rfscope::SizeMetric>(m, "SizeMetric")
        .value("longest_side", rfscope::SizeMetric::longest_side)
        .value("geometric_mean", rfscope::SizeMetric::geometric_mean);

    m.def("load_annotations", &rfscope::load_annotations, py::arg("text"));
    m.def("serialize_annotations", &rfscope::serialize_annotations, py::arg("boxes"));
    m.def("box_sizes", &rfscope::box_sizes, py::arg("boxes"), py::arg("scale"),
          py::arg("metric") = rfscope::SizeMetric::longest_side);
    m.def("anchor_stats", &rfscope::anchor_stats, py::arg("boxes"), py::arg("scale"),
          py::arg("metric") = rfscope::SizeMetric::longest_side);
    m.def("rf_targets", &rfscope::rf_targets, py::arg("stats"), py::arg("config"));
    m.def("search_blocks", &rfscope::search_blocks, py::arg("targets"), py::arg("input_size"),
          py::arg("n_max") = 8);
    m.def("alignment_report_csv", &rfscope::alignment_report_csv, py::arg("result"));

    // --- Detection metrics -----------------------------------------------
    py::class_<rfscope::Box>(m, "Box")
        .def(py::init<>())
        .def(py::init([](double x_min, double y_min, double x_max, double y_max) {
                 return rfscope::Box{x_min, y_min, x_max, y_max};
             }),
             py::arg("x_min"), py::arg("y_min"), py::arg("x_max"), py::arg("y_max"))
        .def_readwrite("x_min", &rfscope::Box::x_min)
        .def_readwrite("y_min", &rfscope::Box::y_min)
        .def_readwrite("x_max", &rfscope::Box::x_max)
        .def_readwrite("y_max", &rfscope::Box::y_max)
        .def(py::self == py::self);

    py::class_<rfscope::DetectionRecord>(m, "DetectionRecord")
        .def(py::init<>())
        .def(py::init([](const std::string& image_id, const std::string& class_label,
                         double score, const rfscope::Box& box) {
                 return rfscope::DetectionRecord{image_id, class_label, score, box};
             }),
             py::arg("image_id"), py::arg("class_label"), py::arg("score"), py::arg("box"))
        .def_readwrite("image_id", &rfscope::DetectionRecord::image_id)
        .def_readwrite("class_label", &rfscope::DetectionRecord::class_label)
        .def_readwrite("score", &rfscope::DetectionRecord::score)
        .def_readwrite("box", &rfscope::DetectionRecord::box)
        .def(py::self == py::self);

    py::class_<rfscope::GroundTruthRecord>(m, "GroundTruthRecord")
        .def(py::init<>())
        .def(py::init([](const std::string& image_id, const std::string& class_label,
                         const rfscope::Box& box) {
                 return rfscope::GroundTruthRecord{image_id, class_label, box};
             }),
             py::arg("image_id"), py::arg("class_label"), py::arg("box"))
        .def_readwrite("image_id", &rfscope::GroundTruthRecord::image_id)
        .def_readwrite("class_label", &rfscope::GroundTruthRecord::class_label)
        .def_readwrite("box", &rfscope::GroundTruthRecord::box)
        .def(py::self == py::self);

    py::enum_<rfscope::ApInterpolation>(m, "ApInterpolation")
        .value("all_point", rfscope::ApInterpolation::all_point)
        .value("eleven_point", rfscope::ApInterpolation::eleven_point);

    py::class_<rfscope::EvalReport>(m, "EvalReport")
        .def(py::init<>())
        .def_readwrite("precision", &rfscope::EvalReport::precision)
        .def_readwrite("recall", &rfscope::EvalReport::recall)
        .def_readwrite("f1", &rfscope::EvalReport::f1)
        .def_readwrite("tp", &rfscope::EvalReport::tp)
        .def_readwrite("fp", &rfscope::EvalReport::fp)
        .def_readwrite("fn", &rfscope::EvalReport::fn)
        .def_readwrite("per_class_ap", &rfscope::EvalReport::per_class_ap)
        .def_readwrite("map50", &rfscope::EvalReport::map50)
        .def_readwrite("best_f1", &rfscope::EvalReport::best_f1)
        .def_readwrite("best_f1_conf", &rfscope::EvalReport::best_f1_conf)
        .def_readwrite("best_f1_precision", &rfscope::EvalReport::best_f1_precision)
        .def_readwrite("best_f1_recall", &rfscope::EvalReport::best_f1_recall)
        .def_readwrite("conf_threshold", &rfscope::EvalReport::conf_threshold)
        .def_readwrite("iou_threshold", &rfscope::EvalReport::iou_threshold)
        .def_readwrite("warnings", &rfscope::EvalReport::warnings);

    m.def("iou", &rfscope::iou, py::arg("a"), py::arg("b"));
    m.def("evaluate", &rfscope::evaluate, py::arg("gts"), py::arg("dets"),
          py::arg("iou_threshold") = 0.5, py::arg("conf_threshold") = 0.25,
          py::arg("interp") = rfscope::ApInterpolation::all_point);
    m.def("load_ground_truth", &rfscope::load_ground_truth, py::arg("text"));
    m.def("load_detections", &rfscope::load_detections, py::arg("text"));
    m.def("serialize_ground_truth", &rfscope::serialize_ground_truth, py::arg("records"));
    m.def("serialize_detections", &rfscope::serialize_detections, py::arg("records"));
    m.def("report_csv", &rfscope::report_csv, py::arg("report"));
}
