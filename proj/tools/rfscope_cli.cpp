// Command-line front end: one binary, one subcommand per analysis.
//
// Exit codes: 0 on success, 1 when an input fails validation (single-line
// diagnostic on stderr), 2 on usage errors.

#include <array>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rfscope/aligner.hpp"
#include "rfscope/archspec.hpp"
#include "rfscope/detmetrics.hpp"
#include "rfscope/errors.hpp"
#include "rfscope/fusion.hpp"
#include "rfscope/gridscope.hpp"
#include "rfscope/rf_engine.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file)
        throw rfscope::Error("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw rfscope::Error("cannot write file: " + path);
    file << content;
    if (!file)
        throw rfscope::Error("cannot write file: " + path);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

int parse_int_field(const std::string& text, const std::string& flag,
                    const std::string& expected) {
    int value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw CLI::ValidationError(flag, "expected " + expected + ", got \"" + text + "\"");
    return value;
}

std::array<int, 5> parse_backbone_arg(const std::string& arg) {
    const std::vector<std::string> parts = split(arg, ',');
    if (parts.size() != 5)
        throw CLI::ValidationError("--backbone",
                                   "expected five comma-separated block counts, got \"" + arg +
                                       "\"");
    std::array<int, 5> counts{};
    for (std::size_t i = 0; i < 5; ++i)
        counts[i] = parse_int_field(parts[i], "--backbone", "an integer block count");
    return counts;
}

std::vector<rfscope::LayerSpec> parse_stack_arg(const std::string& arg) {
    std::vector<rfscope::LayerSpec> layers;
    for (const std::string& entry : split(arg, ',')) {
        const std::vector<std::string> kd = split(entry, ':');
        if (kd.size() != 2)
            throw CLI::ValidationError("--stack",
                                       "expected k:d entries, got \"" + entry + "\"");
        rfscope::LayerSpec layer;
        layer.kernel = parse_int_field(kd[0], "--stack", "a kernel size");
        layer.dilation = parse_int_field(kd[1], "--stack", "a dilation rate");
        layer.stride = 1;
        layers.push_back(layer);
    }
    return layers;
}

std::pair<int, int> parse_pre_arg(const std::string& arg) {
    const std::vector<std::string> parts = split(arg, 'x');
    if (parts.size() != 2)
        throw CLI::ValidationError("--pre", "expected COUNTxK (e.g. 5x3), got \"" + arg + "\"");
    const int count = parse_int_field(parts[0], "--pre", "a conv count");
    const int kernel = parse_int_field(parts[1], "--pre", "a kernel size");
    if (count < 0)
        throw CLI::ValidationError("--pre", "conv count must be non-negative");
    return {count, kernel};
}

struct RfArgs {
    std::string spec_path;
    std::string backbone;
    int input = 0;
    std::string csv_path;
};

void run_rf(const RfArgs& args) {
    rfscope::NetworkSpec spec;
    if (!args.backbone.empty()) {
        rfscope::BackboneParams params;
        params.block_counts = parse_backbone_arg(args.backbone);
        params.input_size = args.input;
        spec = rfscope::build_backbone(params);
    } else {
        spec = rfscope::parse_network(read_file(args.spec_path));
        spec.input_size = args.input; // --input overrides the document value
        rfscope::validate(spec);
    }
    const std::string table = rfscope::stage_table_csv(rfscope::stage_table(spec));
    if (args.csv_path.empty())
        std::cout << table;
    else
        write_file(args.csv_path, table);
}

struct GridmapArgs {
    std::string spec_path;
    std::string stack;
    std::string pgm_path;
    std::string csv_path;
    bool ascii = false;
};

void run_gridmap(const GridmapArgs& args) {
    rfscope::NetworkSpec spec;
    if (!args.stack.empty()) {
        spec.layers = parse_stack_arg(args.stack);
        spec.input_size = 640; // maps depend only on the layer stack
    } else {
        spec = rfscope::parse_network(read_file(args.spec_path));
    }
    const rfscope::UtilizationMap map = rfscope::utilization_map(spec);
    if (!args.pgm_path.empty())
        write_file(args.pgm_path, rfscope::map_to_pgm(map));
    if (!args.csv_path.empty())
        write_file(args.csv_path, rfscope::map_to_csv(map));
    if (args.ascii)
        std::cout << rfscope::map_to_ascii(map);
    else if (args.pgm_path.empty() && args.csv_path.empty())
        std::cout << rfscope::map_to_csv(map);
}

struct AgrfmArgs {
    std::string pre;
    int kernel = 0;
    int dilation = 0;
    bool advise = false;
};

void run_agrfm(const AgrfmArgs& args) {
    const auto [count, pre_kernel] = parse_pre_arg(args.pre);
    rfscope::AntiGridQuery query;
    query.pre_stack.assign(static_cast<std::size_t>(count), pre_kernel);
    query.last_kernel = args.kernel;
    query.last_dilation = args.dilation;
    const rfscope::AntiGridResult result = rfscope::check_anti_grid(query);
    std::cout << "admissible=" << (result.admissible ? "true" : "false") << '\n';
    if (args.advise) {
        const auto limit = rfscope::max_admissible_dilation(query.pre_stack, query.last_kernel);
        if (limit)
            std::cout << "max_dilation=" << *limit << '\n';
        else
            std::cout << "max_dilation=unbounded\n";
    }
}

struct AlignArgs {
    std::string annotations_path;
    double lambda = 4.0;
    int input = 640;
    int native = 2048;
    int n_max = 8;
    std::string size_metric = "max";
};

void run_align(const AlignArgs& args) {
    const std::vector<rfscope::BoxRecord> boxes =
        rfscope::load_annotations(read_file(args.annotations_path));
    rfscope::AlignConfig config;
    config.lambda = args.lambda;
    config.input_size = args.input;
    config.native_size = args.native;
    const rfscope::SizeMetric metric = args.size_metric == "gmean"
                                           ? rfscope::SizeMetric::geometric_mean
                                           : rfscope::SizeMetric::longest_side;
    const rfscope::AnchorStats stats = rfscope::anchor_stats(boxes, config.scale(), metric);
    const rfscope::RFTargets targets = rfscope::rf_targets(stats, config);
    const rfscope::AlignmentResult result =
        rfscope::search_blocks(targets, config.input_size, args.n_max);
    std::cout << rfscope::alignment_report_csv(result);
}

struct EvalArgs {
    std::string gt_path;
    std::string pred_path;
    double iou = 0.5;
    double conf = 0.25;
    std::string interp = "all";
};

void run_eval(const EvalArgs& args) {
    const auto gts = rfscope::load_ground_truth(read_file(args.gt_path));
    const auto dets = rfscope::load_detections(read_file(args.pred_path));
    const rfscope::ApInterpolation interp = args.interp == "11pt"
                                                ? rfscope::ApInterpolation::eleven_point
                                                : rfscope::ApInterpolation::all_point;
    const rfscope::EvalReport report =
        rfscope::evaluate(gts, dets, args.iou, args.conf, interp);
    for (const std::string& warning : report.warnings)
        std::cerr << "warning: " << warning << '\n';
    std::cout << rfscope::report_csv(report);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Receptive-field, grid-effect, and detection-metric analyses"};
    app.require_subcommand(1);

    RfArgs rf_args;
    CLI::App* rf = app.add_subcommand("rf", "Per-stage receptive-field table for a conv stack");
    auto* rf_source = rf->add_option_group("source", "network source");
    rf_source->add_option("--spec", rf_args.spec_path, "network spec JSON file");
    rf_source->add_option("--backbone", rf_args.backbone,
                          "five comma-separated block counts (e.g. 3,1,1,1,1)");
    rf_source->require_option(1);
    rf->add_option("--input", rf_args.input, "input size in pixels (overrides a spec file's)")
        ->required();
    rf->add_option("--csv", rf_args.csv_path, "write the stage table to this file");
    rf->callback([&rf_args] { run_rf(rf_args); });

    GridmapArgs gridmap_args;
    CLI::App* gridmap =
        app.add_subcommand("gridmap", "Pixel-utilization map of a stride-1 conv stack");
    auto* gridmap_source = gridmap->add_option_group("source", "network source");
    gridmap_source->add_option("--spec", gridmap_args.spec_path, "network spec JSON file");
    gridmap_source->add_option("--stack", gridmap_args.stack,
                               "comma-separated k:d layers (e.g. 3:1,3:2)");
    gridmap_source->require_option(1);
    gridmap->add_option("--pgm", gridmap_args.pgm_path, "write the map as a PGM image");
    gridmap->add_option("--csv", gridmap_args.csv_path, "write the map as CSV");
    gridmap->add_flag("--ascii", gridmap_args.ascii, "print an ASCII heatmap to stdout");
    gridmap->callback([&gridmap_args] { run_gridmap(gridmap_args); });

    AgrfmArgs agrfm_args;
    CLI::App* agrfm =
        app.add_subcommand("agrfm", "Anti-grid admissibility check for a dilated conv");
    agrfm->add_option("--pre", agrfm_args.pre,
                      "preceding standard convs as COUNTxK (e.g. 5x3)")
        ->required();
    agrfm->add_option("--kernel", agrfm_args.kernel, "kernel size of the dilated conv")
        ->required();
    agrfm->add_option("--dilation", agrfm_args.dilation, "dilation rate of the dilated conv")
        ->required();
    agrfm->add_flag("--advise", agrfm_args.advise,
                    "also print the largest admissible dilation rate");
    agrfm->callback([&agrfm_args] { run_agrfm(agrfm_args); });

    AlignArgs align_args;
    CLI::App* align = app.add_subcommand(
        "align", "Anchor statistics, per-stage RF targets, and block-count search");
    align->add_option("--annotations", align_args.annotations_path, "annotation CSV file")
        ->required();
    align->add_option("--lambda", align_args.lambda, "target scaling factor")->required();
    align->add_option("--input", align_args.input, "network input size in pixels")->required();
    align->add_option("--native", align_args.native, "native image size in pixels")->required();
    align->add_option("--n-max", align_args.n_max, "largest per-stage block count searched");
    align->add_option("--size-metric", align_args.size_metric,
                      "box size definition: max (longest side) or gmean")
        ->check(CLI::IsMember({"max", "gmean"}));
    align->callback([&align_args] { run_align(align_args); });

    EvalArgs eval_args;
    CLI::App* eval =
        app.add_subcommand("eval", "Precision/recall/F1 and mAP50 from detection CSVs");
    eval->add_option("--gt", eval_args.gt_path, "ground-truth CSV file")->required();
    eval->add_option("--pred", eval_args.pred_path, "detection CSV file")->required();
    eval->add_option("--iou", eval_args.iou, "IoU threshold for matching");
    eval->add_option("--conf", eval_args.conf, "confidence threshold for P/R/F1");
    eval->add_option("--interp", eval_args.interp, "AP integration rule: all or 11pt")
        ->check(CLI::IsMember({"all", "11pt"}));
    eval->callback([&eval_args] { run_eval(eval_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const rfscope::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
