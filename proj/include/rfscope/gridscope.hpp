#ifndef RFSCOPE_GRIDSCOPE_HPP
#define RFSCOPE_GRIDSCOPE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rfscope/archspec.hpp"

namespace rfscope {

/// Per-input-pixel count of kernel tap paths reaching the central output
/// unit of a stride-1 stack. The grid spans [-half_extent, +half_extent]
/// on both axes; offsets are relative to the center tap.
struct UtilizationMap {
    std::vector<std::int64_t> counts; // row-major, (2*half_extent+1)^2 cells
    int half_extent = 0;

    int side() const { return 2 * half_extent + 1; }

    std::int64_t at(int x, int y) const {
        return counts[static_cast<std::size_t>(y + half_extent) * side() +
                      static_cast<std::size_t>(x + half_extent)];
    }

    bool operator==(const UtilizationMap&) const = default;
};

struct GridDiagnostics {
    bool has_interior_zeros = false; // zero cell strictly inside the support box
    double coverage_ratio = 1.0;     // nonzero cells / support-box cells
    double uniformity = 1.0;         // min nonzero count / max count in support
};

/// Admissibility query: a run of standard convolutions (stride 1,
/// dilation 1) followed by one dilated convolution.
struct AntiGridQuery {
    std::vector<int> pre_stack; // kernel sizes of the standard convs
    int last_kernel = 3;
    int last_dilation = 1;
};

struct AntiGridResult {
    bool admissible = false;
    std::int64_t k_prime = 0; // equivalent kernel of the pre-stack
    std::int64_t lhs = 0;     // (k-1)*r + 1
};

/// Computes the exact tap-path multiplicity map by iterated 2D convolution
/// of indicator kernels. Requires stride 1 on every layer and odd kernels;
/// refuses stacks whose receptive field exceeds 1024 pixels or whose total
/// path count overflows 64 bits.
UtilizationMap utilization_map(const NetworkSpec& spec);

GridDiagnostics diagnostics(const UtilizationMap& map);

/// Admissibility check: (k-1)*r + 1 < k' with k' = sum(k_i - 1) + 1 over the
/// pre-stack. Throws ValidationError when the pre-stack is empty.
AntiGridResult check_anti_grid(const AntiGridQuery& query);

/// Largest admissible dilation rate floor((k'-2)/(k-1)), 0 when no rate >= 1
/// passes. Returns nullopt for last_kernel == 1 (any rate is admissible).
std::optional<std::int64_t> max_admissible_dilation(const std::vector<int>& pre_stack,
                                                    int last_kernel);

/// Dilation-branch stack of the anti-grid module: n_standard stride-1 convs
/// of size `kernel` followed by one conv of the same size with `dilation`.
NetworkSpec build_agrfm_stack(int n_standard, int kernel, int dilation,
                              int input_size = 640);

/// Integer CSV, row-major, origin at the grid center, LF endings.
std::string map_to_csv(const UtilizationMap& map);

/// Plain PGM (P2) with maxval = max count.
std::string map_to_pgm(const UtilizationMap& map);

/// 10-level ASCII heatmap using the ramp " .:-=+*#%@"; zero cells always
/// render as spaces and the peak count as '@'.
std::string map_to_ascii(const UtilizationMap& map);

} // namespace rfscope

#endif
