#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "flexline/shield.hpp"

namespace flexline {

struct MetricReport {
    std::string instance_id;
    std::string method;
    double dcl = 0.0;
    double dtl = 0.0;
    double total_changeover = 0.0;
    double total_tardiness = 0.0;
    double wall_time_seconds = 0.0;
    int line_count = 0;  // n
    int plan_days = 0;   // d
    int job_count = 0;
};

// Daily changeover / tardiness load: objective totals over (lines * days).
double dcl(const Schedule& schedule, const Instance& instance);
double dtl(const Schedule& schedule, const Instance& instance);

struct SuiteInstance {
    std::string id;
    // Either a pre-built instance or a generator spec evaluated on demand.
    std::variant<Instance, GeneratorSpec> source;
};

enum class SelectionKey {
    DtlDcl,  // tardiness first (default)
    DclDtl,  // the paper's objective order
};

struct SuiteTrainFresh {
    int episodes = 500;
};

struct SuiteConfig {
    std::vector<SuiteInstance> instances;
    std::vector<std::string> methods;  // PDR names, "a2c", "a2c+shield"
    int runs = 1;
    std::uint64_t seed = 0;
    SelectionKey selection_key = SelectionKey::DtlDcl;
    double overdue_penalty = 0.28;
    int l_max = 8;
    RuleParams rules;
    // Learned methods need either a checkpoint or fresh per-instance training.
    std::optional<Checkpoint> checkpoint;
    std::optional<SuiteTrainFresh> train_fresh;
    ShieldConfig shield;  // seed is derived per run
    // When false, wall times report as 0 so suite outputs are byte-stable.
    bool timing = true;
};

// Runs every (instance, method) cell `runs` times with derived seeds and keeps
// the best schedule under the selection key. Schedules are feasibility-checked
// before being scored; an infeasible one aborts the suite.
std::vector<MetricReport> run_suite(const SuiteConfig& config);

// Aligned plain-text table and CSV, 3-decimal values.
std::string render_table(const std::vector<MetricReport>& reports);
std::string render_csv(const std::vector<MetricReport>& reports);

// One horizontal band per occupied line, hatched changeover blocks, day
// gridlines, tardy tasks outlined. Deterministic text output.
std::string gantt_svg(const Schedule& schedule, const Instance& instance);

// Suite config JSON (see README for the schema).
SuiteConfig parse_suite_config(const std::string& json_text);

}  // namespace flexline
