#include "rfscope/rf_engine.hpp"

#include <string>

namespace rfscope {

std::vector<RFState> propagate(const NetworkSpec& spec) {
    validate(spec);

    RFState state{1, 1, spec.input_size};
    std::vector<RFState> states;
    states.reserve(spec.layers.size());

    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const LayerSpec& layer = spec.layers[i];
        if (layer.kernel % 2 == 0)
            throw ValidationError("layer " + std::to_string(i) +
                                  ": even kernel not supported with \"same\" padding");
        const std::int64_t reach =
            static_cast<std::int64_t>(layer.dilation) * (layer.kernel - 1);
        const std::int64_t padding = reach / 2;

        state.rf += reach * state.jump;
        state.size = (state.size + 2 * padding - reach - 1) / layer.stride + 1;
        state.jump *= layer.stride;
        if (state.size < 1)
            throw ValidationError("layer " + std::to_string(i) +
                                  ": spatial size underflows below 1");
        states.push_back(state);
    }
    return states;
}

std::vector<StageReport> stage_table(const NetworkSpec& spec) {
    const std::vector<RFState> states = propagate(spec);
    std::vector<StageReport> reports;
    reports.reserve(spec.stage_marks.size());
    // std::map keeps P1..P5 in lexicographic = stage order.
    for (const auto& [stage, index] : spec.stage_marks) {
        const RFState& s = states[index];
        reports.push_back(StageReport{stage, s.size, s.rf, s.jump});
    }
    return reports;
}

std::string stage_table_csv(const std::vector<StageReport>& reports) {
    std::string out = "stage,size,rf,jump\n";
    for (const StageReport& r : reports) {
        out += r.stage;
        out += ',';
        out += std::to_string(r.size);
        out += ',';
        out += std::to_string(r.rf);
        out += ',';
        out += std::to_string(r.jump);
        out += '\n';
    }
    return out;
}

} // namespace rfscope
