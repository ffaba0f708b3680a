#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "flexline/instance.hpp"

namespace flexline {

// One dispatched run: job at slot `position` (1-based) of its line, with the
// realized timing. All times are hours from the horizon origin.
struct ScheduledTask {
    int job = 0;
    int line = 0;
    int position = 1;
    double changeover_hours = 0.0;
    double start_hours = 0.0;
    double processing_hours = 0.0;
    double completion_hours = 0.0;
    double tardiness_hours = 0.0;

    bool operator==(const ScheduledTask&) const = default;
};

using Schedule = std::vector<ScheduledTask>;

// A hypothetical dispatch of `job` onto `line` from the current state.
struct Candidate {
    int job = 0;
    int line = 0;
    double changeover_hours = 0.0;
    double start_hours = 0.0;
    double processing_hours = 0.0;
    double completion_hours = 0.0;
    double tardiness_hours = 0.0;

    bool operator==(const Candidate&) const = default;
};

// Residual-scheduling state: dispatched runs are frozen environment, decisions
// range over the remaining jobs. Values copy cheaply (O(schedule size)), which
// the shield's rollouts rely on.
class EnvState {
public:
    EnvState() = default;
    explicit EnvState(std::shared_ptr<const Instance> instance);

    const Instance& instance() const { return *instance_; }
    std::shared_ptr<const Instance> instance_ptr() const { return instance_; }

    int step_count() const { return step_; }
    int remaining_count() const { return remaining_; }
    bool is_dispatched(int job) const { return dispatched_[job] != 0; }
    int last_job(int line) const { return last_job_[line]; }
    double available_hours(int line) const { return available_[line]; }
    double busy_hours(int line) const { return busy_[line]; }
    int overdue_count() const { return overdue_; }
    double changeover_total() const { return changeover_total_; }
    double tardiness_total() const { return tardiness_total_; }
    const std::vector<ScheduledTask>& line_tasks(int line) const { return tasks_[line]; }

    // Tasks in dispatch order.
    const Schedule& schedule() const { return order_; }

    bool operator==(const EnvState& other) const;

private:
    friend Candidate make_candidate(const EnvState&, int, int);
    friend double apply_step(EnvState&, const Candidate&, double);

    std::shared_ptr<const Instance> instance_;
    std::vector<std::vector<ScheduledTask>> tasks_;  // per line
    Schedule order_;
    std::vector<int> last_job_;      // -1 when the line is empty
    std::vector<double> available_;  // completion of the line's last task
    std::vector<double> busy_;       // sum of changeover+processing per line
    std::vector<char> dispatched_;
    int remaining_ = 0;
    int step_ = 0;
    int overdue_ = 0;
    double changeover_total_ = 0.0;
    double tardiness_total_ = 0.0;
};

// Fresh state over a validated instance; throws on invalid instances.
EnvState reset(std::shared_ptr<const Instance> instance);
EnvState reset(const Instance& instance);

bool is_terminal(const EnvState& state);

// Timing per the model: changeover from the line's last job (or the initial
// changeover), start at the earliest feasible hour, i.e.
// max(available + changeover, 24*(demand_day-1), setup + changeover on an
// empty line). Throws when the job was already dispatched or the pair is
// ineligible.
Candidate make_candidate(const EnvState& state, int job, int line);

// Commits the candidate in place and returns the step reward
// 1/(1 + changeover) - (overdue_penalty if tardy). Callers that need the
// previous state keep their own copy; `step` below does exactly that.
double apply_step(EnvState& state, const Candidate& candidate, double overdue_penalty = 0.28);

// Pure variant: the input state is untouched.
std::pair<EnvState, double> step(const EnvState& state, const Candidate& candidate,
                                 double overdue_penalty = 0.28);

// (total changeover hours, total tardiness hours)
std::pair<double, double> totals(const Schedule& schedule);

// Feasibility report against the ten constraint families of the MILP plus the
// timing identities (processing = lot/rate and so on). equation 0 marks an
// identity mismatch rather than a numbered constraint.
struct ConstraintViolation {
    int equation = 0;  // 1..10, or 0 for a timing-identity mismatch
    int i = -1;        // job
    int r = -1;        // position (1-based)
    int j = -1;        // line
    double slack = 0.0;
    std::string message;
};

struct Report {
    std::vector<ConstraintViolation> violations;
    bool ok() const { return violations.empty(); }
};

// Tardiness is recomputed from start times, never trusted from the input.
Report check_constraints(const Instance& instance, const Schedule& schedule);

// Schedule JSON: array of tasks sorted by (line, position), 1-based indices.
std::string save_schedule(const Schedule& schedule);
Schedule load_schedule(const std::string& text);

}  // namespace flexline
