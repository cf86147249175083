#include "rfscope/fusion.hpp"

#include <algorithm>
#include <unordered_map>

namespace rfscope {

namespace {

std::string shape_string(const TensorShape& s) {
    return std::to_string(s.height) + "x" + std::to_string(s.width) + "x" +
           std::to_string(s.channels);
}

} // namespace

const FusionNode& FusionGraph::node(const std::string& id) const {
    auto it = std::find_if(nodes.begin(), nodes.end(),
                           [&](const FusionNode& n) { return n.id == id; });
    if (it == nodes.end())
        throw ValidationError("fusion graph: no node named \"" + id + "\"");
    return *it;
}

void infer_shapes(FusionGraph& graph) {
    std::unordered_map<std::string, const FusionNode*> resolved;

    for (FusionNode& node : graph.nodes) {
        if (resolved.count(node.id))
            throw ValidationError("fusion graph: duplicate node id \"" + node.id + "\"");

        std::vector<const TensorShape*> inputs;
        for (const std::string& input : node.inputs) {
            auto it = resolved.find(input);
            // Inputs must be defined earlier in the list; this is also what
            // keeps the graph acyclic.
            if (it == resolved.end() || !it->second->shape)
                throw ValidationError("fusion graph: node \"" + node.id +
                                      "\" references undefined input \"" + input + "\"");
            inputs.push_back(&*it->second->shape);
        }

        switch (node.op) {
        case FusionOp::source:
            if (!node.inputs.empty())
                throw ValidationError("fusion graph: source node \"" + node.id +
                                      "\" cannot have inputs");
            if (!node.shape)
                throw ValidationError("fusion graph: source node \"" + node.id +
                                      "\" needs a preset shape");
            break;
        case FusionOp::bilinear_resize: {
            if (inputs.size() != 1)
                throw ValidationError("fusion graph: resize node \"" + node.id +
                                      "\" needs exactly one input");
            if (node.target_height < 1 || node.target_width < 1)
                throw ValidationError("fusion graph: resize node \"" + node.id +
                                      "\" needs a positive target size");
            node.shape = TensorShape{node.target_height, node.target_width,
                                     inputs[0]->channels};
            break;
        }
        case FusionOp::concat: {
            if (inputs.empty())
                throw ValidationError("fusion graph: concat node \"" + node.id +
                                      "\" needs at least one input");
            TensorShape out = *inputs[0];
            for (std::size_t i = 1; i < inputs.size(); ++i) {
                if (inputs[i]->height != out.height || inputs[i]->width != out.width)
                    throw ValidationError(
                        "fusion graph: concat \"" + node.id + "\" input \"" +
                        node.inputs[i] + "\" is " + shape_string(*inputs[i]) +
                        " but \"" + node.inputs[0] + "\" is " + shape_string(*inputs[0]));
                out.channels += inputs[i]->channels;
            }
            node.shape = out;
            break;
        }
        case FusionOp::agrfm_passthrough: {
            if (inputs.size() != 1)
                throw ValidationError("fusion graph: passthrough node \"" + node.id +
                                      "\" needs exactly one input");
            TensorShape out = *inputs[0];
            if (node.out_channels > 0)
                out.channels = node.out_channels;
            node.shape = out;
            break;
        }
        }
        resolved.emplace(node.id, &node);
    }
}

FusionGraph infer_fusion(const std::vector<StageReport>& stages,
                         const std::map<std::string, std::int64_t>& channels) {
    std::map<std::string, const StageReport*> by_name;
    for (const StageReport& stage : stages)
        by_name[stage.stage] = &stage;

    for (const char* required : {"P2", "P3", "P4", "P5"}) {
        if (!by_name.count(required))
            throw ValidationError(std::string("fusion: stage table is missing ") + required);
        if (!channels.count(required))
            throw ValidationError(std::string("fusion: no channel count for ") + required);
    }

    auto source = [&](const char* name) {
        const StageReport& stage = *by_name.at(name);
        FusionNode node;
        node.id = name;
        node.op = FusionOp::source;
        node.shape = TensorShape{stage.size, stage.size, channels.at(name)};
        return node;
    };
    auto resize = [&](std::string id, std::string input, const StageReport& target) {
        FusionNode node;
        node.id = std::move(id);
        node.op = FusionOp::bilinear_resize;
        node.inputs = {std::move(input)};
        node.target_height = target.size;
        node.target_width = target.size;
        return node;
    };

    const StageReport& p2 = *by_name.at("P2");
    const StageReport& p3 = *by_name.at("P3");

    FusionGraph graph;
    graph.nodes.push_back(source("P2"));
    graph.nodes.push_back(source("P3"));
    graph.nodes.push_back(source("P4"));
    graph.nodes.push_back(source("P5"));
    graph.nodes.push_back(resize("P5_up", "P5", p3));
    graph.nodes.push_back(resize("P4_up", "P4", p3));
    graph.nodes.push_back(FusionNode{"F_fuse", FusionOp::concat, {"P5_up", "P4_up", "P3"}});
    graph.nodes.push_back(FusionNode{"F_sup", FusionOp::agrfm_passthrough, {"F_fuse"}});
    graph.nodes.push_back(resize("F_sup_up", "F_sup", p2));
    graph.nodes.push_back(FusionNode{"F_B2", FusionOp::concat, {"F_sup_up", "P2"}});

    infer_shapes(graph);
    return graph;
}

} // namespace rfscope
