#include "flexline/encoder.hpp"

#include <stdexcept>

namespace flexline {

namespace {

FeatureMatrix occupancy_only(const EnvState& state, int l_max) {
    const Instance& inst = state.instance();
    if (inst.line_count() > l_max) {
        throw std::invalid_argument("encode: instance has more lines than l_max");
    }
    FeatureMatrix m;
    m.rows = kFeatureRows;
    m.cols = l_max;
    m.data.assign(static_cast<std::size_t>(m.rows) * m.cols, 0.0);
    const double horizon = inst.horizon_hours();
    for (int j = 0; j < inst.line_count(); ++j) {
        double occ = state.busy_hours(j) / horizon;
        if (occ > 1.0) {
            occ = 1.0;
            ++m.clamped_entries;
        }
        m.at(0, j) = occ;
    }
    return m;
}

void fill_increments(FeatureMatrix& m, const EnvState& state,
                     const std::array<Candidate, kRuleCount>& selected) {
    const double horizon = state.instance().horizon_hours();
    for (int k = 0; k < kRuleCount; ++k) {
        const Candidate& c = selected[k];
        double inc = (c.changeover_hours + c.processing_hours) / horizon;
        if (inc > 1.0) {
            inc = 1.0;
            ++m.clamped_entries;
        }
        m.at(1 + k, c.line) = inc;
    }
}

}  // namespace

FeatureMatrix encode(const EnvState& state, int l_max, const RuleParams& params) {
    FeatureMatrix m = occupancy_only(state, l_max);
    if (!is_terminal(state)) {
        fill_increments(m, state, select_all(state, params));
    }
    return m;
}

FeatureMatrix encode_with_selection(const EnvState& state, int l_max,
                                    const std::array<Candidate, kRuleCount>& selected) {
    FeatureMatrix m = occupancy_only(state, l_max);
    fill_increments(m, state, selected);
    return m;
}

std::vector<double> flatten(const FeatureMatrix& matrix) { return matrix.data; }

}  // namespace flexline
