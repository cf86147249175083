#include "rfscope/archspec.hpp"

#include <algorithm>

#include "json.hpp"

namespace rfscope {

namespace {

using nlohmann::ordered_json;

constexpr const char* kStageNames[] = {"P1", "P2", "P3", "P4", "P5"};

bool is_stage_name(const std::string& name) {
    return std::find(std::begin(kStageNames), std::end(kStageNames), name) !=
           std::end(kStageNames);
}

void reject_unknown_keys(const ordered_json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& item : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
                return item.key() == k;
            }) == allowed.end()) {
            throw ValidationError("unknown field \"" + item.key() + "\" in " + where);
        }
    }
}

int require_positive_int(const ordered_json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key))
        throw ValidationError(std::string("missing field \"") + key + "\" in " + where);
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1)
        throw ValidationError(std::string("field \"") + key + "\" in " + where +
                              " must be a positive integer");
    return v.get<int>();
}

} // namespace

void validate(const NetworkSpec& spec) {
    if (spec.input_size < 1)
        throw ValidationError("input_size must be a positive integer");
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const LayerSpec& layer = spec.layers[i];
        if (layer.kernel < 1 || layer.stride < 1 || layer.dilation < 1)
            throw ValidationError("layer " + std::to_string(i) +
                                  ": kernel, stride and dilation must be >= 1");
    }
    std::size_t previous = 0;
    bool first = true;
    for (const char* name : kStageNames) {
        auto it = spec.stage_marks.find(name);
        if (it == spec.stage_marks.end())
            continue;
        if (it->second >= spec.layers.size())
            throw ValidationError("stage mark " + it->first + " index " +
                                  std::to_string(it->second) + " is out of range (" +
                                  std::to_string(spec.layers.size()) + " layers)");
        if (!first && it->second <= previous)
            throw ValidationError("stage mark indices must be strictly increasing in P1..P5 order");
        previous = it->second;
        first = false;
    }
    for (const auto& [name, index] : spec.stage_marks) {
        (void)index;
        if (!is_stage_name(name))
            throw ValidationError("unknown stage name \"" + name + "\" (expected P1..P5)");
    }
}

NetworkSpec parse_network(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("network spec: syntax error at byte " + std::to_string(e.byte) +
                         ": " + e.what());
    }
    if (!doc.is_object())
        throw ValidationError("network spec: top level must be an object");
    reject_unknown_keys(doc, {"input_size", "layers", "stages"}, "network spec");

    NetworkSpec spec;
    spec.input_size = require_positive_int(doc, "input_size", "network spec");

    if (!doc.contains("layers") || !doc.at("layers").is_array())
        throw ValidationError("network spec: missing \"layers\" array");
    std::size_t index = 0;
    for (const auto& entry : doc.at("layers")) {
        const std::string where = "layer " + std::to_string(index);
        if (!entry.is_object())
            throw ValidationError(where + ": must be an object");
        reject_unknown_keys(entry, {"kind", "kernel", "stride", "dilation", "label"}, where);
        if (!entry.contains("kind") || !entry.at("kind").is_string() ||
            entry.at("kind").get<std::string>() != "conv")
            throw ValidationError(where + ": field \"kind\" must be \"conv\"");
        LayerSpec layer;
        layer.kernel = require_positive_int(entry, "kernel", where);
        layer.stride = require_positive_int(entry, "stride", where);
        layer.dilation = require_positive_int(entry, "dilation", where);
        if (entry.contains("label")) {
            if (!entry.at("label").is_string())
                throw ValidationError(where + ": field \"label\" must be a string");
            layer.label = entry.at("label").get<std::string>();
        }
        spec.layers.push_back(std::move(layer));
        ++index;
    }

    if (doc.contains("stages")) {
        const auto& stages = doc.at("stages");
        if (!stages.is_object())
            throw ValidationError("network spec: \"stages\" must be an object");
        for (const auto& item : stages.items()) {
            if (!is_stage_name(item.key()))
                throw ValidationError("unknown stage name \"" + item.key() +
                                      "\" (expected P1..P5)");
            if (!item.value().is_number_integer() || item.value().get<std::int64_t>() < 0)
                throw ValidationError("stage mark " + item.key() +
                                      " must be a non-negative integer");
            spec.stage_marks[item.key()] = item.value().get<std::size_t>();
        }
    }

    validate(spec);
    return spec;
}

std::string serialize_network(const NetworkSpec& spec) {
    ordered_json doc;
    doc["input_size"] = spec.input_size;
    doc["layers"] = ordered_json::array();
    for (const LayerSpec& layer : spec.layers) {
        ordered_json entry;
        entry["kind"] = "conv";
        entry["kernel"] = layer.kernel;
        entry["stride"] = layer.stride;
        entry["dilation"] = layer.dilation;
        if (!layer.label.empty())
            entry["label"] = layer.label;
        doc["layers"].push_back(std::move(entry));
    }
    if (!spec.stage_marks.empty()) {
        ordered_json stages;
        for (const char* name : kStageNames) {
            auto it = spec.stage_marks.find(name);
            if (it != spec.stage_marks.end())
                stages[name] = it->second;
        }
        doc["stages"] = std::move(stages);
    }
    return doc.dump(2) + "\n";
}

NetworkSpec build_backbone(const BackboneParams& params) {
    if (params.input_size < 1)
        throw ValidationError("input_size must be a positive integer");
    for (int n : params.block_counts)
        if (n < 0 || n > 16)
            throw ValidationError("block counts must lie in [0, 16]");

    NetworkSpec spec;
    spec.input_size = params.input_size;

    auto conv = [&](int kernel, int stride, std::string label) {
        spec.layers.push_back(LayerSpec{LayerKind::conv, kernel, stride, 1, std::move(label)});
    };

    conv(3, 2, "stem");
    for (int stage = 1; stage <= 5; ++stage) {
        const std::string prefix = "P" + std::to_string(stage);
        if (stage > 1)
            conv(3, 2, prefix + "_down");
        for (int block = 1; block <= params.block_counts[stage - 1]; ++block) {
            conv(3, 1, prefix + "_b" + std::to_string(block) + "_c1");
            conv(3, 1, prefix + "_b" + std::to_string(block) + "_c2");
        }
        spec.stage_marks[prefix] = spec.layers.size() - 1;
    }
    return spec;
}

} // namespace rfscope
