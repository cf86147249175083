#ifndef RFSCOPE_FUSION_HPP
#define RFSCOPE_FUSION_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rfscope/rf_engine.hpp"

namespace rfscope {

struct TensorShape {
    std::int64_t height = 1;
    std::int64_t width = 1;
    std::int64_t channels = 1;

    bool operator==(const TensorShape&) const = default;
};

enum class FusionOp {
    source,            // shape preset by the caller
    bilinear_resize,   // spatial resize to (target_height, target_width)
    concat,            // channel concat; inputs must agree on h x w
    agrfm_passthrough, // shape-only stand-in for the anti-grid module
};

/// Node of the fusion graph. Inputs must reference nodes defined earlier in
/// the list, which keeps the graph acyclic by construction.
struct FusionNode {
    std::string id;
    FusionOp op = FusionOp::source;
    std::vector<std::string> inputs;
    std::int64_t target_height = 0; // bilinear_resize only
    std::int64_t target_width = 0;
    std::int64_t out_channels = 0;  // agrfm_passthrough: 0 preserves input channels
    std::optional<TensorShape> shape;
};

struct FusionGraph {
    std::vector<FusionNode> nodes;

    const FusionNode& node(const std::string& id) const;
};

/// Fills every node's shape. Throws ValidationError on dangling references,
/// arity mismatches, or a concat whose inputs disagree on h x w (the message
/// names the two offending shapes).
void infer_shapes(FusionGraph& graph);

/// Builds the high-resolution fusion graph over stage maps P2..P5:
/// the P4 and P5 maps are resized to the P3 grid and concatenated with P3,
/// passed through the anti-grid module, resized to the P2 grid and
/// concatenated with P2. Returns the graph with all shapes inferred.
FusionGraph infer_fusion(const std::vector<StageReport>& stages,
                         const std::map<std::string, std::int64_t>& channels);

} // namespace rfscope

#endif
