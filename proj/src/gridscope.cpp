#include "rfscope/gridscope.hpp"

#include <algorithm>
#include <limits>

namespace rfscope {

namespace {

constexpr std::int64_t kMaxRf = 1024;
constexpr char kAsciiRamp[] = " .:-=+*#%@";

} // namespace

UtilizationMap utilization_map(const NetworkSpec& spec) {
    validate(spec);
    if (spec.layers.empty())
        throw ValidationError("utilization map: stack is empty");

    std::int64_t rf = 1;
    std::int64_t total = 1;
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const LayerSpec& layer = spec.layers[i];
        if (layer.stride != 1)
            throw ValidationError("utilization map: layer " + std::to_string(i) +
                                  " has stride " + std::to_string(layer.stride) +
                                  "; only stride-1 stacks are supported");
        if (layer.kernel % 2 == 0)
            throw ValidationError("utilization map: layer " + std::to_string(i) +
                                  " has an even kernel; taps would fall between pixels");
        rf += static_cast<std::int64_t>(layer.dilation) * (layer.kernel - 1);
        if (rf > kMaxRf)
            throw ValidationError("utilization map: receptive field exceeds " +
                                  std::to_string(kMaxRf) + " pixels");
        const std::int64_t taps = static_cast<std::int64_t>(layer.kernel) * layer.kernel;
        if (total > std::numeric_limits<std::int64_t>::max() / taps)
            throw ValidationError("utilization map: path count overflows 64 bits");
        total *= taps;
    }

    // Iterated 2D convolution of indicator kernels, growing the grid with the
    // cumulated receptive field.
    UtilizationMap map;
    map.half_extent = 0;
    map.counts = {1};
    for (const LayerSpec& layer : spec.layers) {
        const int reach = layer.dilation * (layer.kernel - 1) / 2;
        const int old_half = map.half_extent;
        const int new_half = old_half + reach;
        const int old_side = 2 * old_half + 1;
        const int new_side = 2 * new_half + 1;

        std::vector<std::int64_t> next(static_cast<std::size_t>(new_side) * new_side, 0);
        for (int y = -old_half; y <= old_half; ++y) {
            for (int x = -old_half; x <= old_half; ++x) {
                const std::int64_t c =
                    map.counts[static_cast<std::size_t>(y + old_half) * old_side +
                               (x + old_half)];
                if (c == 0)
                    continue;
                for (int ty = -reach; ty <= reach; ty += layer.dilation) {
                    auto* row = next.data() +
                                static_cast<std::size_t>(y + ty + new_half) * new_side;
                    for (int tx = -reach; tx <= reach; tx += layer.dilation)
                        row[x + tx + new_half] += c;
                }
            }
        }
        map.counts = std::move(next);
        map.half_extent = new_half;
    }
    return map;
}

GridDiagnostics diagnostics(const UtilizationMap& map) {
    const int h = map.half_extent;
    int min_x = h + 1, max_x = -h - 1, min_y = h + 1, max_y = -h - 1;
    for (int y = -h; y <= h; ++y)
        for (int x = -h; x <= h; ++x)
            if (map.at(x, y) != 0) {
                min_x = std::min(min_x, x);
                max_x = std::max(max_x, x);
                min_y = std::min(min_y, y);
                max_y = std::max(max_y, y);
            }
    if (max_x < min_x)
        throw ValidationError("diagnostics: map has no nonzero cells");

    std::int64_t nonzero = 0;
    std::int64_t min_count = std::numeric_limits<std::int64_t>::max();
    std::int64_t max_count = 0;
    bool interior_zero = false;
    for (int y = min_y; y <= max_y; ++y)
        for (int x = min_x; x <= max_x; ++x) {
            const std::int64_t c = map.at(x, y);
            if (c != 0) {
                ++nonzero;
                min_count = std::min(min_count, c);
                max_count = std::max(max_count, c);
            } else if (x > min_x && x < max_x && y > min_y && y < max_y) {
                interior_zero = true;
            }
        }

    const std::int64_t box_cells =
        static_cast<std::int64_t>(max_x - min_x + 1) * (max_y - min_y + 1);
    GridDiagnostics diag;
    diag.has_interior_zeros = interior_zero;
    diag.coverage_ratio = static_cast<double>(nonzero) / static_cast<double>(box_cells);
    diag.uniformity = static_cast<double>(min_count) / static_cast<double>(max_count);
    return diag;
}

AntiGridResult check_anti_grid(const AntiGridQuery& query) {
    if (query.pre_stack.empty())
        throw ValidationError("anti-grid check: empty pre-stack, equivalent kernel undefined");
    for (int k : query.pre_stack)
        if (k < 1)
            throw ValidationError("anti-grid check: pre-stack kernels must be >= 1");
    if (query.last_kernel < 1 || query.last_dilation < 1)
        throw ValidationError("anti-grid check: last kernel and dilation must be >= 1");

    AntiGridResult result;
    result.k_prime = 1;
    for (int k : query.pre_stack)
        result.k_prime += k - 1;
    result.lhs = static_cast<std::int64_t>(query.last_kernel - 1) * query.last_dilation + 1;
    result.admissible = result.lhs < result.k_prime;
    return result;
}

std::optional<std::int64_t> max_admissible_dilation(const std::vector<int>& pre_stack,
                                                    int last_kernel) {
    if (pre_stack.empty())
        throw ValidationError("anti-grid check: empty pre-stack, equivalent kernel undefined");
    if (last_kernel < 1)
        throw ValidationError("anti-grid check: last kernel must be >= 1");
    if (last_kernel == 1)
        return std::nullopt; // a 1x1 kernel cannot grid at any rate

    std::int64_t k_prime = 1;
    for (int k : pre_stack) {
        if (k < 1)
            throw ValidationError("anti-grid check: pre-stack kernels must be >= 1");
        k_prime += k - 1;
    }
    if (k_prime < 2)
        return 0;
    return (k_prime - 2) / (last_kernel - 1);
}

NetworkSpec build_agrfm_stack(int n_standard, int kernel, int dilation, int input_size) {
    if (n_standard < 1)
        throw ValidationError("anti-grid stack: need at least one standard conv");
    if (kernel < 1 || dilation < 1)
        throw ValidationError("anti-grid stack: kernel and dilation must be >= 1");

    NetworkSpec spec;
    spec.input_size = input_size;
    for (int i = 1; i <= n_standard; ++i)
        spec.layers.push_back(
            LayerSpec{LayerKind::conv, kernel, 1, 1, "std" + std::to_string(i)});
    spec.layers.push_back(LayerSpec{LayerKind::conv, kernel, 1, dilation, "dilated"});
    validate(spec);
    return spec;
}

std::string map_to_csv(const UtilizationMap& map) {
    std::string out;
    const int h = map.half_extent;
    for (int y = -h; y <= h; ++y) {
        for (int x = -h; x <= h; ++x) {
            if (x > -h)
                out += ',';
            out += std::to_string(map.at(x, y));
        }
        out += '\n';
    }
    return out;
}

std::string map_to_pgm(const UtilizationMap& map) {
    std::int64_t max_count = 1;
    for (std::int64_t c : map.counts)
        max_count = std::max(max_count, c);

    const int side = map.side();
    std::string out = "P2\n" + std::to_string(side) + " " + std::to_string(side) + "\n" +
                      std::to_string(max_count) + "\n";
    for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
            if (x > 0)
                out += ' ';
            out += std::to_string(map.counts[static_cast<std::size_t>(y) * side + x]);
        }
        out += '\n';
    }
    return out;
}

std::string map_to_ascii(const UtilizationMap& map) {
    std::int64_t max_count = 1;
    for (std::int64_t c : map.counts)
        max_count = std::max(max_count, c);

    std::string out;
    const int h = map.half_extent;
    for (int y = -h; y <= h; ++y) {
        for (int x = -h; x <= h; ++x) {
            const std::int64_t c = map.at(x, y);
            const std::size_t level =
                c == 0 ? 0
                       : 1 + static_cast<std::size_t>(
                                 static_cast<unsigned __int128>(c) * 8 /
                                 static_cast<unsigned __int128>(max_count));
            out += kAsciiRamp[std::min<std::size_t>(level, 9)];
        }
        out += '\n';
    }
    return out;
}

} // namespace rfscope
