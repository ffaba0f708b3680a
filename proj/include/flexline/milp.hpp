#pragma once

#include <string>

#include "flexline/env.hpp"

namespace flexline {

enum class ObjectiveMode {
    Weighted,   // minimize w1 * sum(t) + w2 * sum(o)
    LexStage1,  // minimize sum(t)
    LexStage2,  // minimize sum(o) s.t. sum(t) <= obj1_bound + epsilon
};

struct MilpExportConfig {
    ObjectiveMode mode = ObjectiveMode::Weighted;
    double w1 = 1.0;
    double w2 = 1.0;
    double obj1_bound = 0.0;
    double epsilon = 1e-6;
    int positions_per_line = 0;  // R; 0 means "use the job count"
    double big_m = 0.0;          // 0 means auto
};

// Upper bound on any feasible start or completion time, so a big-M constraint
// is slack whenever its indicator is off.
double auto_big_m(const Instance& instance);

// CPLEX LP text of the position-based model. Binary alpha variables exist for
// eligible (job, line) pairs only; constraints are grouped by equation number
// with indices ascending, one row per line, 1-based names a_i_r_j / s_r_j /
// t_r_j / o_i_r_j.
std::string export_lp(const Instance& instance, const MilpExportConfig& config = {});

struct ExactLimits {
    int max_jobs = 8;
    int max_lines = 3;
};

struct ExactSolution {
    Schedule schedule;
    double obj1 = 0.0;  // total changeover hours
    double obj2 = 0.0;  // total tardiness hours
    bool optimal = false;
};

// Exhaustive oracle: every eligible assignment, every per-line order, each
// realized with the simulator's earliest-start semantics; returns the
// lexicographic minimum of (obj1, obj2). Refuses instances over the limits.
ExactSolution exact_solve(const Instance& instance, const ExactLimits& limits = {});

}  // namespace flexline
