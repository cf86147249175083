#include "doctest.h"

#include <cmath>
#include <random>
#include <string>

#include "rfscope/aligner.hpp"
#include "rfscope/rf_engine.hpp"
#include "test_util.hpp"

using namespace rfscope;

namespace {

BoxRecord square_box(double size) {
    return BoxRecord{"img", "c", 0, 0, size, size};
}

} // namespace

TEST_CASE("the annotation fixture loads with exact field values") {
    const std::vector<BoxRecord> boxes =
        load_annotations(testutil::read_data_file("annotations.csv"));
    REQUIRE(boxes.size() == 3);
    CHECK(boxes[0] == BoxRecord{"img_0001", "speed_limit", 100, 120, 160, 180});
    CHECK(boxes[1] == BoxRecord{"img_0001", "warning", 300.5, 200.25, 340.5, 260.25});
    CHECK(boxes[2] == BoxRecord{"img_0002", "stop", 50, 60, 75, 110});

    // the fixture is stable under a serialize/parse cycle
    CHECK(load_annotations(serialize_annotations(boxes)) == boxes);
}

TEST_CASE("a single valid row parses; malformed rows name their line") {
    const std::vector<BoxRecord> one = load_annotations(
        "image_id,class,x_min,y_min,x_max,y_max\n"
        "a,b,1,2,3,4\n");
    REQUIRE(one.size() == 1);
    CHECK(one[0].width() == 2);

    try {
        load_annotations(
            "image_id,class,x_min,y_min,x_max,y_max\n"
            "a,b,1,2,3,4\n"
            "a,b,9,2,3,4\n");
        FAIL("expected an inverted-box error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }

    try {
        load_annotations(
            "image_id,class,x_min,y_min,x_max,y_max\n"
            "a,b,oops,2,3,4\n");
        FAIL("expected a numeric parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }

    CHECK_THROWS_AS(load_annotations(""), ParseError);
    CHECK_THROWS_AS(load_annotations("wrong,header\n"), ParseError);
    CHECK_THROWS_AS(load_annotations("image_id,class,x_min,y_min,x_max,y_max\na,b,1,2\n"),
                    ParseError);
}

TEST_CASE("a single box collapses all three statistics") {
    const AnchorStats stats = anchor_stats({square_box(30)}, 1.0);
    CHECK(stats.tiny == 30);
    CHECK(stats.mean == 30);
    CHECK(stats.large == 30);
    CHECK(stats.count == 1);

    CHECK_THROWS_AS(anchor_stats({}, 1.0), ValidationError);
}

TEST_CASE("percentile means match hand arithmetic on the 100-box fixture") {
    std::vector<BoxRecord> boxes;
    for (int i = 1; i <= 100; ++i)
        boxes.push_back(square_box(10.0 * i)); // sizes 10, 20, ..., 1000

    const AnchorStats stats = anchor_stats(boxes, 1.0);
    CHECK(stats.tiny == 30.0);   // mean of the smallest 5
    CHECK(stats.mean == 505.0);  // mean of all
    CHECK(stats.large == 995.0); // mean of the largest 2
    CHECK(stats.count == 100);

    // rescaling to 640/2048 of native resolution scales every statistic
    const AnchorStats scaled = anchor_stats(boxes, 0.3125);
    CHECK(scaled.tiny == 30.0 * 0.3125);
    CHECK(scaled.mean == 505.0 * 0.3125);
    CHECK(scaled.large == 995.0 * 0.3125);
}

TEST_CASE("statistics are scale-equivariant and ordered") {
    std::mt19937_64 rng(617);
    std::uniform_real_distribution<double> side(1.0, 400.0);
    for (int round = 0; round < 30; ++round) {
        std::vector<BoxRecord> boxes;
        const std::size_t n = 1 + rng() % 40;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = side(rng), h = side(rng);
            boxes.push_back(BoxRecord{"img", "c", 0, 0, w, h});
        }

        const AnchorStats base = anchor_stats(boxes, 1.0);
        CHECK(base.tiny <= base.mean * (1 + 1e-12));
        CHECK(base.mean <= base.large * (1 + 1e-12));

        const double c = 0.37;
        const AnchorStats scaled = anchor_stats(boxes, c);
        CHECK(scaled.tiny == doctest::Approx(c * base.tiny).epsilon(1e-12));
        CHECK(scaled.mean == doctest::Approx(c * base.mean).epsilon(1e-12));
        CHECK(scaled.large == doctest::Approx(c * base.large).epsilon(1e-12));
    }
}

TEST_CASE("box size supports longest-side and geometric-mean metrics") {
    const std::vector<BoxRecord> boxes = {BoxRecord{"img", "c", 0, 0, 30, 40}};
    CHECK(box_sizes(boxes, 1.0, SizeMetric::longest_side) == std::vector<double>{40.0});
    CHECK(box_sizes(boxes, 1.0, SizeMetric::geometric_mean)[0] ==
          doctest::Approx(std::sqrt(1200.0)));
    CHECK(box_sizes(boxes, 0.5, SizeMetric::longest_side) == std::vector<double>{20.0});
}

TEST_CASE("stage targets follow the scaling rules exactly") {
    AnchorStats stats;
    stats.tiny = 10;
    stats.mean = 20;
    stats.large = std::exp(4.0);
    stats.count = 100;
    AlignConfig cfg; // lambda = 4

    const RFTargets t = rf_targets(stats, cfg);
    CHECK(t.p1 == 40.0);
    CHECK(t.p2 == 120.0);
    CHECK(t.p3 == 80.0);
    CHECK(t.p4 == 4.0 * (20.0 + std::exp(4.0)));
    CHECK(t.p4 == doctest::Approx(298.3926001).epsilon(1e-9));
    CHECK(t.p5 == doctest::Approx(16.0).epsilon(1e-9));
}

TEST_CASE("degenerate statistics give the expected targets") {
    AnchorStats stats;
    stats.tiny = stats.mean = stats.large = 30;
    stats.count = 1;
    AlignConfig cfg;
    cfg.lambda = 1;

    const RFTargets t = rf_targets(stats, cfg);
    CHECK(t.p1 == 30.0);
    CHECK(t.p2 == 60.0);
    CHECK(t.p3 == 30.0);
    CHECK(t.p4 == 60.0);
    CHECK(t.p5 == std::log(30.0));
}

TEST_CASE("target derivation rejects unusable inputs") {
    AnchorStats stats;
    stats.tiny = stats.mean = stats.large = 1; // ln(1) = 0
    stats.count = 1;
    CHECK_THROWS_AS(rf_targets(stats, AlignConfig{}), ValidationError);

    stats.large = 100;
    AlignConfig bad;
    bad.lambda = 0;
    CHECK_THROWS_AS(rf_targets(stats, bad), ValidationError);

    AnchorStats empty;
    CHECK_THROWS_AS(rf_targets(empty, AlignConfig{}), ValidationError);
}

TEST_CASE("the search recovers the published block counts from their RFs") {
    RFTargets targets;
    targets.p1 = 27;
    targets.p2 = 47;
    targets.p3 = 87;
    targets.p4 = 167;
    targets.p5 = 327;

    const AlignmentResult result = search_blocks(targets, 640);
    CHECK(result.block_counts == std::array<int, 5>{3, 1, 1, 1, 1});
    CHECK(result.objective == 0.0);
    CHECK(result.achieved_rf == std::array<std::int64_t, 5>{27, 47, 87, 167, 327});

    CHECK(alignment_report_csv(result) ==
          "stage,target_rf,achieved_rf,blocks\n"
          "P1,27,27,3\n"
          "P2,47,47,1\n"
          "P3,87,87,1\n"
          "P4,167,167,1\n"
          "P5,327,327,1\n");
}

TEST_CASE("the search recovers the block-free backbone and breaks ties downward") {
    RFTargets downsample_only;
    downsample_only.p1 = 3;
    downsample_only.p2 = 7;
    downsample_only.p3 = 15;
    downsample_only.p4 = 31;
    downsample_only.p5 = 63;
    const AlignmentResult plain = search_blocks(downsample_only, 640);
    CHECK(plain.block_counts == std::array<int, 5>{0, 0, 0, 0, 0});
    CHECK(plain.objective == 0.0);

    const RFTargets zeros; // all-zero targets: smallest RFs win via tie-breaks
    const AlignmentResult least = search_blocks(zeros, 640);
    CHECK(least.block_counts == std::array<int, 5>{0, 0, 0, 0, 0});

    CHECK_THROWS_AS(search_blocks(zeros, 640, 17), ValidationError);
    CHECK_THROWS_AS(search_blocks(zeros, 640, -1), ValidationError);
}

TEST_CASE("the exhaustive search beats random configurations") {
    std::mt19937_64 rng(618);
    RFTargets targets;
    targets.p1 = 20 + static_cast<double>(rng() % 40);
    targets.p2 = 50 + static_cast<double>(rng() % 60);
    targets.p3 = 90 + static_cast<double>(rng() % 100);
    targets.p4 = 150 + static_cast<double>(rng() % 150);
    targets.p5 = 300 + static_cast<double>(rng() % 200);

    const AlignmentResult best = search_blocks(targets, 640);
    const std::array<double, 5> wanted = targets.as_array();

    for (int round = 0; round < 1000; ++round) {
        BackboneParams params;
        for (int& n : params.block_counts)
            n = static_cast<int>(rng() % 9);
        params.input_size = 640;
        const std::vector<StageReport> stages = stage_table(build_backbone(params));
        double objective = 0;
        for (std::size_t i = 0; i < 5; ++i)
            objective += std::abs(static_cast<double>(stages[i].rf) - wanted[i]);
        CHECK(best.objective <= objective);
    }
}
