#ifndef RFSCOPE_ARCHSPEC_HPP
#define RFSCOPE_ARCHSPEC_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rfscope/errors.hpp"

namespace rfscope {

enum class LayerKind { conv };

/// One square convolution layer of a sequential stack.
struct LayerSpec {
    LayerKind kind = LayerKind::conv;
    int kernel = 1;   // taps per axis
    int stride = 1;
    int dilation = 1;
    std::string label; // optional

    /// Extent of the dilated kernel in input units: dilation*(kernel-1)+1.
    int effective_kernel() const { return dilation * (kernel - 1) + 1; }

    bool operator==(const LayerSpec&) const = default;
};

/// A sequential convolution stack with optional stage marks (P1..P5) and a
/// square input size. Stage marks index the last layer of each stage.
struct NetworkSpec {
    std::vector<LayerSpec> layers;
    std::map<std::string, std::size_t> stage_marks;
    int input_size = 1;

    bool operator==(const NetworkSpec&) const = default;
};

/// Per-stage bottleneck counts for the backbone template.
struct BackboneParams {
    std::array<int, 5> block_counts{};
    int input_size = 640;
};

/// Throws ValidationError if any invariant fails (non-positive kernel/stride/
/// dilation/input_size, out-of-range or out-of-order stage marks).
void validate(const NetworkSpec& spec);

/// Parses the JSON network document. Unknown fields are rejected.
/// Throws ParseError on syntax errors (position reported) and
/// ValidationError on schema violations.
NetworkSpec parse_network(std::string_view text);

/// Inverse of parse_network: parse_network(serialize_network(s)) == s.
std::string serialize_network(const NetworkSpec& spec);

/// Builds the backbone template: a stride-2 stem, then five stages. Each
/// stage i>1 opens with a stride-2 downsample; every stage appends
/// block_counts[i] bottlenecks of two 3x3 stride-1 convs. Stage marks
/// P1..P5 point at the last layer of each stage.
NetworkSpec build_backbone(const BackboneParams& params);

} // namespace rfscope

#endif
