#include "flexline/shield.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "flexline/rng.hpp"
#include "flexline/textio.hpp"

namespace flexline {

namespace {

// Samples and applies one policy action; returns the applied candidate's
// tardiness flag. The caller owns `state`.
bool play_policy_step(EnvState& state, const Checkpoint& ckpt, const RuleParams& rules, Rng& rng) {
    auto sel = select_all(state, rules);
    auto x = flatten(encode_with_selection(state, ckpt.l_max, sel));
    const ActionMask mask = action_mask(state);
    const auto probs = policy_forward(ckpt.policy, x, mask);
    const int action = sample_action(probs, mask, rng.next_double());
    const Candidate& c = sel[action];
    const bool overdue = c.tardiness_hours > 0.0;
    apply_step(state, c, ckpt.overdue_penalty);
    return overdue;
}

}  // namespace

std::pair<int, int> rollout(const EnvState& state, const Checkpoint& ckpt, Rng& rng) {
    if (is_terminal(state)) throw std::invalid_argument("rollout: terminal state");
    const RuleParams rules{ckpt.swtct_weight};

    EnvState sim = state;
    auto sel = select_all(sim, rules);
    auto x = flatten(encode_with_selection(sim, ckpt.l_max, sel));
    const ActionMask mask = action_mask(sim);
    const auto probs = policy_forward(ckpt.policy, x, mask);
    const int first = sample_action(probs, mask, rng.next_double());
    // The overdue test covers the first virtual action too.
    if (sel[first].tardiness_hours > 0.0) {
        return {first, -1};
    }
    apply_step(sim, sel[first], ckpt.overdue_penalty);
    while (!is_terminal(sim)) {
        if (play_policy_step(sim, ckpt, rules, rng)) {
            return {first, -1};
        }
    }
    return {first, +1};
}

std::array<double, kRuleCount> score(const RolloutStats& stats, const ShieldConfig& config) {
    std::array<double, kRuleCount> g{};
    for (int a = 0; a < kRuleCount; ++a) {
        if (!stats.mask.allowed[a]) {
            g[a] = -std::numeric_limits<double>::infinity();
            continue;
        }
        const double n = stats.visits[a];
        g[a] = config.alpha / (n + 1.0) * stats.outcome_sum[a] +
               (1.0 - config.alpha) * stats.v_next[a] +
               config.beta * stats.prior[a] / (1.0 + n);
    }
    return g;
}

int shielded_decide(const EnvState& state, const Checkpoint& ckpt, const ShieldConfig& config,
                    DecisionTrace* trace) {
    if (is_terminal(state)) throw std::invalid_argument("shielded_decide: terminal state");
    if (config.rollouts < 1) throw std::invalid_argument("shielded_decide: K must be >= 1");
    const RuleParams rules{ckpt.swtct_weight};

    RolloutStats stats;
    stats.mask = action_mask(state);

    auto sel = select_all(state, rules);
    auto x = flatten(encode_with_selection(state, ckpt.l_max, sel));
    const auto probs = policy_forward(ckpt.policy, x, stats.mask);
    for (int a = 0; a < kRuleCount; ++a) {
        if (!stats.mask.allowed[a]) continue;
        stats.prior[a] = probs[a];
        EnvState next = state;
        apply_step(next, sel[a], ckpt.overdue_penalty);
        stats.v_next[a] = value_forward(ckpt.value, flatten(encode(next, ckpt.l_max, rules)));
    }

    // Every rollout owns an RNG stream keyed by (seed, decision step, index),
    // so the aggregate is independent of execution order and thread count.
    const std::uint64_t decision_step = static_cast<std::uint64_t>(state.step_count());
    auto run_range = [&](int begin, int end, RolloutStats& into) {
        for (int k = begin; k < end; ++k) {
            Rng rng(mix_seed(config.seed, decision_step, static_cast<std::uint64_t>(k)));
            auto [first, u] = rollout(state, ckpt, rng);
            into.visits[first] += 1;
            into.outcome_sum[first] += u;
        }
    };

    const int threads = std::max(1, config.threads);
    if (threads == 1) {
        run_range(0, config.rollouts, stats);
    } else {
        std::vector<RolloutStats> partial(threads);
        std::vector<std::thread> pool;
        const int chunk = (config.rollouts + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int begin = t * chunk;
            const int end = std::min(config.rollouts, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end, std::ref(partial[t]));
        }
        for (auto& th : pool) th.join();
        for (const RolloutStats& p : partial) {
            for (int a = 0; a < kRuleCount; ++a) {
                stats.visits[a] += p.visits[a];
                stats.outcome_sum[a] += p.outcome_sum[a];
            }
        }
    }

    const auto g = score(stats, config);
    int best = -1;
    for (int a = 0; a < kRuleCount; ++a) {
        if (!stats.mask.allowed[a]) continue;
        if (best < 0 || g[a] > g[best]) best = a;
    }
    if (trace) {
        trace->step = state.step_count();
        trace->stats = stats;
        trace->scores = g;
        trace->chosen = best;
    }
    return best;
}

std::pair<Schedule, EpisodeStats> shielded_dispatch(const Instance& inst, const Checkpoint& ckpt,
                                                    const ShieldConfig& config,
                                                    std::vector<DecisionTrace>* traces) {
    const RuleParams rules{ckpt.swtct_weight};
    EnvState state = reset(inst);
    EpisodeStats stats;
    while (!is_terminal(state)) {
        DecisionTrace trace;
        const int action = shielded_decide(state, ckpt, config, traces ? &trace : nullptr);
        if (traces) traces->push_back(std::move(trace));
        const Candidate c = select(static_cast<Rule>(action), state, rules);
        stats.rewards.push_back(apply_step(state, c, ckpt.overdue_penalty));
    }
    stats.returns.assign(stats.rewards.size(), 0.0);
    double acc = 0.0;
    for (int t = static_cast<int>(stats.rewards.size()) - 1; t >= 0; --t) {
        acc = stats.rewards[t] + ckpt.discount * acc;
        stats.returns[t] = acc;
    }
    stats.td_errors.assign(stats.rewards.size(), 0.0);
    stats.changeover_total = state.changeover_total();
    stats.tardiness_total = state.tardiness_total();
    stats.overdue_count = state.overdue_count();
    return {state.schedule(), std::move(stats)};
}

std::string trace_csv(const std::vector<DecisionTrace>& traces) {
    std::string out = "step,action,n,sum_u,v_next,prior,G,chosen\n";
    for (const DecisionTrace& t : traces) {
        for (int a = 0; a < kRuleCount; ++a) {
            if (!t.stats.mask.allowed[a]) continue;
            out += std::to_string(t.step);
            out += ',';
            out += std::to_string(a);
            out += ',';
            out += std::to_string(t.stats.visits[a]);
            out += ',';
            out += std::to_string(t.stats.outcome_sum[a]);
            out += ',';
            out += format_double(t.stats.v_next[a]);
            out += ',';
            out += format_double(t.stats.prior[a]);
            out += ',';
            out += format_double(t.scores[a]);
            out += ',';
            out += (a == t.chosen ? '1' : '0');
            out += '\n';
        }
    }
    return out;
}

}  // namespace flexline
