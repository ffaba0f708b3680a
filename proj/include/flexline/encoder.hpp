#pragma once

#include <vector>

#include "flexline/rules.hpp"

namespace flexline {

// Condensed temporal state: row 0 is per-line occupancy, rows 1..10 carry the
// occupancy increment each rule's candidate would cause, placed at the
// candidate's line. Columns beyond the instance's line count stay zero.
struct FeatureMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;  // row-major
    int clamped_entries = 0;   // entries cut to 1 when busy time ran past the horizon

    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
};

inline constexpr int kFeatureRows = 1 + kRuleCount;

// Throws when the instance has more lines than l_max.
FeatureMatrix encode(const EnvState& state, int l_max, const RuleParams& params = {});

// Same, reusing precomputed rule selections (hot path in rollouts).
FeatureMatrix encode_with_selection(const EnvState& state, int l_max,
                                    const std::array<Candidate, kRuleCount>& selected);

std::vector<double> flatten(const FeatureMatrix& matrix);

}  // namespace flexline
