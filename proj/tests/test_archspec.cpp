#include "doctest.h"

#include <random>
#include <string>

#include "rfscope/archspec.hpp"
#include "rfscope/rf_engine.hpp"

using namespace rfscope;

TEST_CASE("parse_network accepts a minimal single-layer document") {
    const NetworkSpec spec = parse_network(
        R"({"input_size": 640,
            "layers": [{"kind":"conv","kernel":3,"stride":2,"dilation":1}]})");
    CHECK(spec.input_size == 640);
    REQUIRE(spec.layers.size() == 1);
    CHECK(spec.layers[0].kernel == 3);
    CHECK(spec.layers[0].stride == 2);
    CHECK(spec.layers[0].dilation == 1);
    CHECK(spec.layers[0].label.empty());
    CHECK(spec.stage_marks.empty());
}

TEST_CASE("parse_network reports the byte position of a syntax error") {
    try {
        parse_network("{\"input_size\": 640, ");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
}

TEST_CASE("parse_network rejects schema violations") {
    // missing field
    CHECK_THROWS_AS(parse_network(R"({"layers": []})"), ValidationError);
    CHECK_THROWS_AS(parse_network(
                        R"({"input_size": 640,
                            "layers": [{"kind":"conv","stride":1,"dilation":1}]})"),
                    ValidationError);
    // non-positive numeric fields
    CHECK_THROWS_AS(parse_network(
                        R"({"input_size": 640,
                            "layers": [{"kind":"conv","kernel":0,"stride":1,"dilation":1}]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_network(
                        R"({"input_size": 640,
                            "layers": [{"kind":"conv","kernel":3,"stride":-2,"dilation":1}]})"),
                    ValidationError);
    // unknown fields, top level and per layer
    CHECK_THROWS_AS(parse_network(R"({"input_size": 640, "layers": [], "padding": 1})"),
                    ValidationError);
    CHECK_THROWS_AS(
        parse_network(
            R"({"input_size": 640,
                "layers": [{"kind":"conv","kernel":3,"stride":1,"dilation":1,"bias":true}]})"),
        ValidationError);
    // unknown kind
    CHECK_THROWS_AS(parse_network(
                        R"({"input_size": 640,
                            "layers": [{"kind":"pool","kernel":3,"stride":1,"dilation":1}]})"),
                    ValidationError);
}

TEST_CASE("stage marks must be in range and strictly increasing") {
    // mark index >= layer count
    CHECK_THROWS_AS(parse_network(
                        R"({"input_size": 640,
                            "layers": [{"kind":"conv","kernel":3,"stride":2,"dilation":1}],
                            "stages": {"P1": 1}})"),
                    ValidationError);
    // out of order: P2 before P1
    CHECK_THROWS_AS(parse_network(
                        R"({"input_size": 640,
                            "layers": [{"kind":"conv","kernel":3,"stride":2,"dilation":1},
                                       {"kind":"conv","kernel":3,"stride":2,"dilation":1}],
                            "stages": {"P1": 1, "P2": 0}})"),
                    ValidationError);
    // unknown stage name
    CHECK_THROWS_AS(parse_network(
                        R"({"input_size": 640,
                            "layers": [{"kind":"conv","kernel":3,"stride":2,"dilation":1}],
                            "stages": {"P9": 0}})"),
                    ValidationError);
}

TEST_CASE("backbone document round-trips through serialize and parse") {
    const NetworkSpec spec = build_backbone(BackboneParams{{3, 1, 1, 1, 1}, 640});
    const NetworkSpec reparsed = parse_network(serialize_network(spec));
    CHECK(reparsed == spec);
}

TEST_CASE("round-trip holds for randomized specs") {
    std::mt19937_64 rng(20240517);
    std::uniform_int_distribution<int> kernel_pick(0, 2);
    std::uniform_int_distribution<int> stride_pick(1, 2);
    std::uniform_int_distribution<int> dilation_pick(1, 4);
    const int kernels[] = {1, 3, 5};

    for (int round = 0; round < 100; ++round) {
        NetworkSpec spec;
        spec.input_size = 1 + static_cast<int>(rng() % 1024);
        const std::size_t n_layers = 1 + rng() % 6;
        for (std::size_t i = 0; i < n_layers; ++i) {
            LayerSpec layer;
            layer.kernel = kernels[kernel_pick(rng)];
            layer.stride = stride_pick(rng);
            layer.dilation = dilation_pick(rng);
            if (rng() % 2)
                layer.label = "l" + std::to_string(i);
            spec.layers.push_back(layer);
        }
        // Random subset of stage names over strictly increasing indices.
        const std::size_t n_marks = rng() % (std::min<std::size_t>(n_layers, 5) + 1);
        std::size_t index = 0;
        for (std::size_t m = 0; m < n_marks; ++m) {
            index += rng() % ((n_layers - index - (n_marks - m - 1)));
            spec.stage_marks["P" + std::to_string(m + 1)] = index;
            ++index;
        }
        validate(spec);
        CHECK(parse_network(serialize_network(spec)) == spec);
    }
}

TEST_CASE("backbone layer count is 1 + 4 + 2*sum(blocks)") {
    const NetworkSpec reference = build_backbone(BackboneParams{{3, 1, 1, 1, 1}, 640});
    CHECK(reference.layers.size() == 19);
    CHECK(reference.stage_marks.at("P1") == 6);

    const NetworkSpec empty_stages = build_backbone(BackboneParams{{0, 0, 0, 0, 0}, 640});
    CHECK(empty_stages.layers.size() == 5);

    std::mt19937_64 rng(7);
    for (int round = 0; round < 50; ++round) {
        BackboneParams params;
        int total = 0;
        for (int& n : params.block_counts) {
            n = static_cast<int>(rng() % 17);
            total += n;
        }
        const NetworkSpec spec = build_backbone(params);
        CHECK(spec.layers.size() == static_cast<std::size_t>(5 + 2 * total));
        CHECK(spec.stage_marks.size() == 5);
        validate(spec);
    }
}

TEST_CASE("backbone params are bounds-checked") {
    CHECK_THROWS_AS(build_backbone(BackboneParams{{-1, 0, 0, 0, 0}, 640}), ValidationError);
    CHECK_THROWS_AS(build_backbone(BackboneParams{{17, 0, 0, 0, 0}, 640}), ValidationError);
    CHECK_THROWS_AS(build_backbone(BackboneParams{{1, 1, 1, 1, 1}, 0}), ValidationError);
}

TEST_CASE("increasing any stage's block count never decreases downstream RFs") {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 40; ++round) {
        BackboneParams params;
        for (int& n : params.block_counts)
            n = static_cast<int>(rng() % 8);
        params.input_size = 640;
        const std::vector<StageReport> base = stage_table(build_backbone(params));

        BackboneParams bumped = params;
        const std::size_t which = rng() % 5;
        bumped.block_counts[which] += 1;
        const std::vector<StageReport> more = stage_table(build_backbone(bumped));

        REQUIRE(base.size() == 5);
        REQUIRE(more.size() == 5);
        for (std::size_t s = which; s < 5; ++s)
            CHECK(more[s].rf >= base[s].rf);
    }
}
