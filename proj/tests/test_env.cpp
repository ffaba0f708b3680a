#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "flexline/env.hpp"
#include "flexline/rng.hpp"
#include "flexline/rules.hpp"
#include "support/testutil.hpp"

using namespace flexline;

namespace {

// The (4, 0) optimum of tiny1: job2 alone on line 2, job1 then job3 on line 1.
Schedule tiny1_optimal() {
    EnvState s = reset(tiny1());
    apply_step(s, make_candidate(s, 1, 1));
    apply_step(s, make_candidate(s, 0, 0));
    apply_step(s, make_candidate(s, 2, 0));
    return s.schedule();
}

}  // namespace

TEST_CASE("reset yields an empty state") {
    EnvState s = reset(tiny1());
    CHECK(s.step_count() == 0);
    CHECK(s.remaining_count() == 3);
    CHECK_FALSE(s.is_dispatched(0));
    CHECK_FALSE(s.is_dispatched(1));
    CHECK_FALSE(s.is_dispatched(2));
    for (int j = 0; j < 2; ++j) {
        CHECK(s.available_hours(j) == 0.0);
        CHECK(s.last_job(j) == -1);
    }
    CHECK_FALSE(is_terminal(s));
    CHECK(reset(tiny1()) == s);
}

TEST_CASE("reset rejects invalid instances") {
    Instance bad = tiny1();
    bad.eligible[0] = {false, false};
    CHECK_THROWS_AS(reset(bad), std::invalid_argument);
}

TEST_CASE("candidate timing on the fresh state") {
    EnvState s = reset(tiny1());
    Candidate c = make_candidate(s, 0, 0);
    CHECK(c.changeover_hours == 1.0);
    CHECK(c.start_hours == 2.0);
    CHECK(c.completion_hours == 6.0);
    CHECK(c.tardiness_hours == 0.0);

    // day-2 job: the demand-day floor dominates
    Candidate d = make_candidate(s, 2, 1);
    CHECK(d.changeover_hours == 1.0);
    CHECK(d.start_hours == 24.0);
    CHECK(d.completion_hours == 27.0);
    CHECK(d.tardiness_hours == 0.0);
}

TEST_CASE("candidate timing after a dispatch, with tardiness") {
    EnvState s = reset(tiny1());
    apply_step(s, make_candidate(s, 0, 0));
    Candidate c = make_candidate(s, 1, 0);
    CHECK(c.changeover_hours == 2.0);
    CHECK(c.start_hours == 8.0);
    CHECK(c.completion_hours == doctest::Approx(8.0 + 200.0 / 12.0));
    CHECK(c.tardiness_hours == doctest::Approx(200.0 / 12.0 - 16.0));  // 0.6667
}

TEST_CASE("make_candidate rejects bad preconditions") {
    EnvState s = reset(tiny1());
    apply_step(s, make_candidate(s, 0, 0));
    CHECK_THROWS_WITH_AS(make_candidate(s, 0, 1),
                         doctest::Contains("already dispatched"), std::invalid_argument);
    Instance partial = tiny1();
    partial.eligible[2][0] = false;
    EnvState p = reset(partial);
    CHECK_THROWS_WITH_AS(make_candidate(p, 2, 0), doctest::Contains("not eligible"),
                         std::invalid_argument);
}

TEST_CASE("step rewards follow 1/(1+c) - h") {
    EnvState s = reset(tiny1());
    auto [s1, r1] = step(s, make_candidate(s, 0, 0));
    CHECK(r1 == doctest::Approx(0.5));
    auto [s2, r2] = step(s1, make_candidate(s1, 1, 0));
    CHECK(r2 == doctest::Approx(1.0 / 3.0 - 0.28));
    CHECK(s2.overdue_count() == 1);
    // zero changeover gives the full unit reward
    Instance free = tiny1();
    free.changeover[0][0][0] = 0.0;
    EnvState f = reset(free);
    auto [f1, rf] = step(f, make_candidate(f, 0, 0));
    CHECK(rf == doctest::Approx(1.0));
    CHECK(f1.step_count() == 1);
    // step is pure: the inputs were not touched
    CHECK(s.step_count() == 0);
    CHECK(s1.step_count() == 1);
}

TEST_CASE("is_terminal flips after the last dispatch") {
    EnvState s = reset(tiny1());
    CHECK_FALSE(is_terminal(s));
    apply_step(s, make_candidate(s, 0, 0));
    apply_step(s, make_candidate(s, 1, 1));
    CHECK_FALSE(is_terminal(s));
    apply_step(s, make_candidate(s, 2, 0));
    CHECK(is_terminal(s));

    Instance empty = tiny1();
    empty.jobs.clear();
    empty.rate.clear();
    empty.eligible.clear();
    empty.changeover.assign(1, {});
    EnvState e = reset(empty);
    CHECK(is_terminal(e));
}

TEST_CASE("totals sums the schedule") {
    auto [c, t] = totals(tiny1_optimal());
    CHECK(c == doctest::Approx(4.0));
    CHECK(t == doctest::Approx(0.0));
    CHECK(totals({}).first == 0.0);
    CHECK(totals({}).second == 0.0);
    Schedule one{{0, 0, 1, 1.0, 2.0, 3.0, 5.0, 0.5}};
    CHECK(totals(one).first == 1.0);
    CHECK(totals(one).second == 0.5);
}

TEST_CASE("the known optimal schedule passes every constraint") {
    Report report = check_constraints(tiny1(), tiny1_optimal());
    CHECK(report.ok());
}

TEST_CASE("double assignment violates eq 2") {
    Schedule bad = tiny1_optimal();
    // job 1 appears again at position 2 of line 2
    EnvState s = reset(tiny1());
    apply_step(s, make_candidate(s, 1, 1));
    ScheduledTask dup = s.line_tasks(1).front();
    dup.position = 2;
    bad.push_back(dup);
    Report report = check_constraints(tiny1(), bad);
    CHECK_FALSE(report.ok());
    bool found_eq2 = false;
    for (const auto& v : report.violations) found_eq2 |= v.equation == 2;
    CHECK(found_eq2);
}

TEST_CASE("an early position-2 start violates eq 10") {
    Schedule bad = tiny1_optimal();
    for (ScheduledTask& t : bad) {
        if (t.line == 0 && t.position == 2) {
            t.start_hours = 6.0;  // before completion(6) + changeover(2)
            t.completion_hours = t.start_hours + t.processing_hours;
            t.tardiness_hours = 0.0;
        }
    }
    Report report = check_constraints(tiny1(), bad);
    bool found_eq10 = false;
    for (const auto& v : report.violations) found_eq10 |= v.equation == 10;
    CHECK(found_eq10);
}

TEST_CASE("understated tardiness violates eq 6") {
    EnvState s = reset(tiny1());
    apply_step(s, make_candidate(s, 0, 0));
    apply_step(s, make_candidate(s, 1, 0));  // tardy by 0.6667
    Schedule bad = s.schedule();
    for (ScheduledTask& t : bad) t.tardiness_hours = 0.0;
    Report report = check_constraints(tiny1(), bad);
    bool found_eq6 = false;
    for (const auto& v : report.violations) found_eq6 |= v.equation == 6;
    CHECK(found_eq6);
}

TEST_CASE("random rollouts always satisfy the constraint families") {
    for (int k = 0; k < 300; ++k) {
        Instance inst = testutil::random_instance(k, 15, 4);
        Rng rng(mix_seed(0xE3B, k));
        EnvState state = reset(inst);
        double reward_sum = 0.0;
        while (!is_terminal(state)) {
            auto candidates = enumerate_candidates(state);
            const auto& pick = candidates[rng.bounded(candidates.size())];
            reward_sum += apply_step(state, pick, 0.28);
        }
        CAPTURE(k);
        Report report = check_constraints(inst, state.schedule());
        if (!report.ok()) {
            CAPTURE(report.violations.front().message);
        }
        CHECK(report.ok());

        // reward decomposition: sum of step rewards == sum 1/(1+c) - h*overdue
        double recomputed = -0.28 * state.overdue_count();
        for (const ScheduledTask& t : state.schedule()) {
            recomputed += 1.0 / (1.0 + t.changeover_hours);
        }
        CHECK(std::abs(reward_sum - recomputed) < 1e-9);

        // counters match the schedule record
        auto [c_total, t_total] = totals(state.schedule());
        CHECK(state.changeover_total() == doctest::Approx(c_total).epsilon(1e-12));
        CHECK(state.tardiness_total() == doctest::Approx(t_total).epsilon(1e-12));

        // per line: starts ordered, eq4/eq5 floors respected
        for (int j = 0; j < inst.line_count(); ++j) {
            const auto& tasks = state.line_tasks(j);
            for (std::size_t r = 0; r < tasks.size(); ++r) {
                const ScheduledTask& t = tasks[r];
                CHECK(t.start_hours >= 24.0 * (inst.jobs[t.job].demand_day - 1) - 1e-12);
                if (r == 0) {
                    CHECK(t.start_hours - t.changeover_hours >=
                          inst.lines[j].setup_hours - 1e-12);
                } else {
                    CHECK(t.start_hours >=
                          tasks[r - 1].completion_hours + t.changeover_hours - 1e-12);
                }
            }
        }
    }
}

TEST_CASE("schedule json round-trips and sorts by line and position") {
    Schedule sched = tiny1_optimal();
    std::string text = save_schedule(sched);
    Schedule back = load_schedule(text);
    REQUIRE(back.size() == sched.size());
    CHECK(save_schedule(back) == text);
    // sorted: line 1 pos 1, line 1 pos 2, line 2 pos 1
    CHECK(back[0].line == 0);
    CHECK(back[0].position == 1);
    CHECK(back[1].line == 0);
    CHECK(back[1].position == 2);
    CHECK(back[2].line == 1);
}
