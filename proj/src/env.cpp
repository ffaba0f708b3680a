#include "flexline/env.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace flexline {

EnvState::EnvState(std::shared_ptr<const Instance> instance) : instance_(std::move(instance)) {
    const int I = instance_->job_count();
    const int J = instance_->line_count();
    tasks_.resize(J);
    last_job_.assign(J, -1);
    available_.assign(J, 0.0);
    busy_.assign(J, 0.0);
    dispatched_.assign(I, 0);
    remaining_ = I;
}

bool EnvState::operator==(const EnvState& other) const {
    if (static_cast<bool>(instance_) != static_cast<bool>(other.instance_)) return false;
    if (instance_ && !(*instance_ == *other.instance_)) return false;
    return tasks_ == other.tasks_ && order_ == other.order_ && last_job_ == other.last_job_ &&
           available_ == other.available_ && busy_ == other.busy_ &&
           dispatched_ == other.dispatched_ && remaining_ == other.remaining_ &&
           step_ == other.step_ && overdue_ == other.overdue_ &&
           changeover_total_ == other.changeover_total_ &&
           tardiness_total_ == other.tardiness_total_;
}

EnvState reset(std::shared_ptr<const Instance> instance) {
    auto violations = validate(*instance);
    if (!violations.empty()) {
        throw std::invalid_argument("reset: invalid instance: " + violations.front().message);
    }
    return EnvState(std::move(instance));
}

EnvState reset(const Instance& instance) {
    return reset(std::make_shared<const Instance>(instance));
}

bool is_terminal(const EnvState& state) { return state.remaining_count() == 0; }

Candidate make_candidate(const EnvState& state, int job, int line) {
    const Instance& inst = state.instance();
    if (job < 0 || job >= inst.job_count() || line < 0 || line >= inst.line_count()) {
        throw std::invalid_argument("make_candidate: job or line index out of range");
    }
    if (state.is_dispatched(job)) {
        throw std::invalid_argument("make_candidate: job " + std::to_string(job + 1) +
                                    " already dispatched");
    }
    if (!inst.eligible[job][line]) {
        throw std::invalid_argument("make_candidate: job " + std::to_string(job + 1) +
                                    " not eligible on line " + std::to_string(line + 1));
    }

    Candidate c;
    c.job = job;
    c.line = line;
    const int last = state.last_job(line);
    c.changeover_hours = last < 0 ? inst.initial_changeover(job, line)
                                  : inst.changeover_between(last, job, line);
    double start = state.available_hours(line) + c.changeover_hours;
    start = std::max(start, 24.0 * (inst.jobs[job].demand_day - 1));
    if (last < 0) {
        start = std::max(start, inst.lines[line].setup_hours + c.changeover_hours);
    }
    c.start_hours = start;
    c.processing_hours = inst.processing_hours(job, line);
    c.completion_hours = c.start_hours + c.processing_hours;
    c.tardiness_hours = std::max(0.0, c.completion_hours - 24.0 * inst.jobs[job].demand_day);
    return c;
}

double apply_step(EnvState& state, const Candidate& c, double overdue_penalty) {
    if (state.dispatched_[c.job]) {
        throw std::invalid_argument("step: job already dispatched");
    }
    ScheduledTask task;
    task.job = c.job;
    task.line = c.line;
    task.position = static_cast<int>(state.tasks_[c.line].size()) + 1;
    task.changeover_hours = c.changeover_hours;
    task.start_hours = c.start_hours;
    task.processing_hours = c.processing_hours;
    task.completion_hours = c.completion_hours;
    task.tardiness_hours = c.tardiness_hours;

    state.tasks_[c.line].push_back(task);
    state.order_.push_back(task);
    state.last_job_[c.line] = c.job;
    state.available_[c.line] = c.completion_hours;
    state.busy_[c.line] += c.changeover_hours + c.processing_hours;
    state.dispatched_[c.job] = 1;
    --state.remaining_;
    ++state.step_;
    state.changeover_total_ += c.changeover_hours;
    state.tardiness_total_ += c.tardiness_hours;

    double reward = 1.0 / (1.0 + c.changeover_hours);
    if (c.tardiness_hours > 0.0) {
        ++state.overdue_;
        reward -= overdue_penalty;
    }
    return reward;
}

std::pair<EnvState, double> step(const EnvState& state, const Candidate& c,
                                 double overdue_penalty) {
    EnvState next = state;
    double reward = apply_step(next, c, overdue_penalty);
    return {std::move(next), reward};
}

std::pair<double, double> totals(const Schedule& schedule) {
    double changeover = 0.0;
    double tardiness = 0.0;
    for (const ScheduledTask& t : schedule) {
        changeover += t.changeover_hours;
        tardiness += t.tardiness_hours;
    }
    return {changeover, tardiness};
}

namespace {

constexpr double kTol = 1e-9;

}  // namespace

Report check_constraints(const Instance& inst, const Schedule& schedule) {
    Report report;
    auto add = [&report](int eq, int i, int r, int j, double slack, std::string msg) {
        report.violations.push_back({eq, i, r, j, slack, std::move(msg)});
    };

    const int I = inst.job_count();
    const int J = inst.line_count();

    // Index tasks by (line, position); duplicate slots break Eq. (1).
    std::map<std::pair<int, int>, const ScheduledTask*> by_slot;
    std::vector<int> dispatch_count(I, 0);
    for (const ScheduledTask& t : schedule) {
        if (t.line < 0 || t.line >= J || t.job < 0 || t.job >= I || t.position < 1) {
            add(0, t.job, t.position, t.line, 0.0, "task indices out of range");
            continue;
        }
        ++dispatch_count[t.job];
        auto key = std::make_pair(t.line, t.position);
        auto [it, inserted] = by_slot.emplace(key, &t);
        if (!inserted) {
            add(1, t.job, t.position, t.line, 1.0,
                "slot holds more than one job (eq 1)");
        }
    }
    for (int i = 0; i < I; ++i) {
        if (dispatch_count[i] != 1) {
            add(2, i, -1, -1, std::abs(dispatch_count[i] - 1.0),
                "job " + std::to_string(i + 1) + " dispatched " +
                    std::to_string(dispatch_count[i]) + " times (eq 2)");
        }
    }

    for (const auto& [key, tp] : by_slot) {
        const ScheduledTask& t = *tp;
        const int i = t.job;
        const int r = t.position;
        const int j = t.line;
        const Job& job = inst.jobs[i];

        if (!inst.eligible[i][j]) {
            add(3, i, r, j, 1.0, "job on ineligible line (eq 3)");
            continue;  // rate may be zero; timing identities are undefined here
        }

        // Timing identities; tardiness is recomputed below, never trusted.
        const double proc = inst.processing_hours(i, j);
        if (std::abs(t.processing_hours - proc) > kTol) {
            add(0, i, r, j, std::abs(t.processing_hours - proc),
                "processing_hours differs from lot/rate");
        }
        if (std::abs(t.completion_hours - (t.start_hours + t.processing_hours)) > kTol) {
            add(0, i, r, j, std::abs(t.completion_hours - t.start_hours - t.processing_hours),
                "completion differs from start + processing");
        }
        const double due = 24.0 * job.demand_day;
        const double overdue = std::max(0.0, t.start_hours + proc - due);
        if (t.tardiness_hours < overdue - kTol) {
            add(6, i, r, j, overdue - t.tardiness_hours,
                "recorded tardiness below completion - due (eq 6)");
        } else if (t.tardiness_hours < -kTol) {
            add(7, i, r, j, -t.tardiness_hours, "negative tardiness (eq 7)");
        } else if (std::abs(t.tardiness_hours - overdue) > kTol) {
            add(0, i, r, j, std::abs(t.tardiness_hours - overdue),
                "recorded tardiness differs from recomputed value");
        }

        // Eq. (4): no start before the demand day opens.
        const double floor = 24.0 * (job.demand_day - 1);
        if (t.start_hours < floor - kTol) {
            add(4, i, r, j, floor - t.start_hours, "start before demand day (eq 4)");
        }

        if (r == 1) {
            // Eq. (5): the line's setup precedes the first changeover.
            const double setup = inst.lines[j].setup_hours;
            if (t.start_hours - t.changeover_hours < setup - kTol) {
                add(5, i, r, j, setup - (t.start_hours - t.changeover_hours),
                    "first task starts inside line setup (eq 5)");
            }
            // Eq. (9): first changeover covers the initial changeover.
            const double c0 = inst.initial_changeover(i, j);
            if (t.changeover_hours < c0 - kTol) {
                add(9, i, r, j, c0 - t.changeover_hours,
                    "first changeover below C0 (eq 9)");
            }
        } else {
            auto prev = by_slot.find({j, r - 1});
            // An empty predecessor slot leaves eqs (8) and (10) M-relaxed,
            // exactly as the MILP is written.
            if (prev != by_slot.end()) {
                const ScheduledTask& p = *prev->second;
                if (p.job != i && inst.eligible[p.job][j]) {
                    const double c = inst.changeover_between(p.job, i, j);
                    if (t.changeover_hours < c - kTol) {
                        add(8, i, r, j, c - t.changeover_hours,
                            "changeover below sequence-dependent value (eq 8)");
                    }
                }
                if (inst.eligible[p.job][j]) {
                    const double ready =
                        p.start_hours + inst.processing_hours(p.job, j) + t.changeover_hours;
                    if (t.start_hours < ready - kTol) {
                        add(10, i, r, j, ready - t.start_hours,
                            "start overlaps previous task + changeover (eq 10)");
                    }
                }
            }
        }
    }
    return report;
}

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void sched_error(const std::string& what) {
    throw std::runtime_error("schedule schema: " + what);
}

}  // namespace

std::string save_schedule(const Schedule& schedule) {
    Schedule sorted = schedule;
    std::sort(sorted.begin(), sorted.end(), [](const ScheduledTask& a, const ScheduledTask& b) {
        return std::tie(a.line, a.position) < std::tie(b.line, b.position);
    });
    ordered_json arr = ordered_json::array();
    for (const ScheduledTask& t : sorted) {
        ordered_json o;
        o["job"] = t.job + 1;
        o["line"] = t.line + 1;
        o["position"] = t.position;
        o["changeover_hours"] = t.changeover_hours;
        o["start_hours"] = t.start_hours;
        o["completion_hours"] = t.completion_hours;
        o["tardiness_hours"] = t.tardiness_hours;
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
}

Schedule load_schedule(const std::string& text) {
    ordered_json arr;
    try {
        arr = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        sched_error(e.what());
    }
    if (!arr.is_array()) sched_error("expected an array of tasks");
    Schedule schedule;
    for (const auto& o : arr) {
        if (!o.is_object()) sched_error("expected task objects");
        ScheduledTask t;
        t.job = o.at("job").get<int>() - 1;
        t.line = o.at("line").get<int>() - 1;
        t.position = o.at("position").get<int>();
        t.changeover_hours = o.at("changeover_hours").get<double>();
        t.start_hours = o.at("start_hours").get<double>();
        t.completion_hours = o.at("completion_hours").get<double>();
        t.tardiness_hours = o.at("tardiness_hours").get<double>();
        t.processing_hours = t.completion_hours - t.start_hours;
        schedule.push_back(t);
    }
    return schedule;
}

}  // namespace flexline
