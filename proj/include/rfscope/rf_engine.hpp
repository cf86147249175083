#ifndef RFSCOPE_RF_ENGINE_HPP
#define RFSCOPE_RF_ENGINE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rfscope/archspec.hpp"

namespace rfscope {

/// Receptive field, cumulative stride and spatial size after a layer.
/// The input itself is rf=1, jump=1, size=input_size.
struct RFState {
    std::int64_t rf = 1;
    std::int64_t jump = 1;
    std::int64_t size = 1;

    bool operator==(const RFState&) const = default;
};

struct StageReport {
    std::string stage;
    std::int64_t size = 0;
    std::int64_t rf = 0;
    std::int64_t jump = 0;

    bool operator==(const StageReport&) const = default;
};

/// Runs the receptive-field recursion over the stack and returns the state
/// after each layer (layers.size() entries; the implicit input state is not
/// included). Spatial sizes use "same" padding p = d*(k-1)/2, which requires
/// odd kernels; even kernels throw ValidationError.
std::vector<RFState> propagate(const NetworkSpec& spec);

/// One report per stage mark, in P1..P5 order. Empty when the network
/// carries no marks.
std::vector<StageReport> stage_table(const NetworkSpec& spec);

/// CSV with header "stage,size,rf,jump", one row per stage, LF endings.
std::string stage_table_csv(const std::vector<StageReport>& reports);

} // namespace rfscope

#endif
