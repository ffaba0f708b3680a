#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flexline/a2c.hpp"
#include "flexline/rng.hpp"

namespace flexline {

struct ShieldConfig {
    int rollouts = 1200;  // K
    double alpha = 0.95;
    double beta = 0.33;
    std::uint64_t seed = 0;
    int threads = 1;  // rollout results are identical for any thread count
};

// Aggregated over the K rollouts of one decision. v_next and prior are
// computed once, deterministically, for every allowed action.
struct RolloutStats {
    std::array<int, kRuleCount> visits{};       // n(a)
    std::array<int, kRuleCount> outcome_sum{};  // sum of u_k in {-1,+1}
    std::array<double, kRuleCount> v_next{};
    std::array<double, kRuleCount> prior{};
    ActionMask mask;
};

// One simulated dispatch chain: samples a first action at `state`, then plays
// the policy to the end. u = -1 as soon as an applied action is overdue,
// u = +1 when the episode finishes clean. `state` itself is never touched.
std::pair<int, int> rollout(const EnvState& state, const Checkpoint& checkpoint, Rng& rng);

// Eq.-(15)-style score per action; disallowed actions get -infinity.
std::array<double, kRuleCount> score(const RolloutStats& stats, const ShieldConfig& config);

struct DecisionTrace {
    int step = 0;
    RolloutStats stats;
    std::array<double, kRuleCount> scores{};
    int chosen = 0;
};

// Runs K rollouts, scores every allowed action, returns the argmax (ties to
// the lowest index). Deterministic for fixed (state, params, seed), for any
// thread count.
int shielded_decide(const EnvState& state, const Checkpoint& checkpoint,
                    const ShieldConfig& config, DecisionTrace* trace = nullptr);

std::pair<Schedule, EpisodeStats> shielded_dispatch(const Instance& instance,
                                                    const Checkpoint& checkpoint,
                                                    const ShieldConfig& config,
                                                    std::vector<DecisionTrace>* traces = nullptr);

// Per-decision trace CSV: "step,action,n,sum_u,v_next,prior,G,chosen".
std::string trace_csv(const std::vector<DecisionTrace>& traces);

}  // namespace flexline
