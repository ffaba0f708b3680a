#include "flexline/a2c.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "flexline/rng.hpp"

namespace flexline {

double td_target(double reward, double v_next_target, double eta, bool terminal) {
    return reward + (terminal ? 0.0 : eta * v_next_target);
}

int sample_action(const std::array<double, kRuleCount>& probs, const ActionMask& mask, double u) {
    double acc = 0.0;
    int last_allowed = -1;
    for (int k = 0; k < kRuleCount; ++k) {
        if (!mask.allowed[k]) continue;
        last_allowed = k;
        acc += probs[k];
        if (u < acc) return k;
    }
    if (last_allowed < 0) throw std::invalid_argument("sample_action: empty mask");
    return last_allowed;  // u landed on accumulated rounding dust
}

namespace {

void scale_grads(MlpGrads& grads, double factor) {
    for (auto& w : grads.weights) {
        for (double& v : w) v *= factor;
    }
    for (auto& b : grads.biases) {
        for (double& v : b) v *= factor;
    }
}

Instance episode_instance(const TrainConfig& config, std::int64_t episode_index) {
    if (config.fixed_instance) return *config.fixed_instance;
    GeneratorSpec spec = *config.generator;
    spec.seed = mix_seed(spec.seed, static_cast<std::uint64_t>(episode_index));
    return generate(spec);
}

}  // namespace

TrainResult train(const TrainConfig& config, const Checkpoint* resume) {
    if (config.fixed_instance.has_value() == config.generator.has_value()) {
        throw std::invalid_argument("train: exactly one instance source required");
    }
    if (config.discount < 0.0 || config.discount > 1.0 || config.target_mix < 0.0 ||
        config.target_mix > 1.0) {
        throw std::invalid_argument("train: discount and target_mix must lie in [0,1]");
    }
    if (config.lr_value <= 0.0 || config.lr_policy <= 0.0) {
        throw std::invalid_argument("train: learning rates must be positive");
    }

    const int input_dim = kFeatureRows * config.l_max;
    TrainResult result;
    Checkpoint& ckpt = result.checkpoint;
    if (resume) {
        if (resume->policy.desc.input_dim != input_dim) {
            throw std::invalid_argument("train: resume checkpoint feature width mismatch");
        }
        ckpt = *resume;
    } else {
        MlpDescriptor policy_desc{input_dim, config.hidden, kRuleCount};
        MlpDescriptor value_desc{input_dim, config.hidden, 1};
        ckpt.policy = init(policy_desc, mix_seed(config.seed, 0));
        ckpt.value = init(value_desc, mix_seed(config.seed, 1));
        ckpt.target = ckpt.value;
        ckpt.adam_policy = make_adam(ckpt.policy, config.lr_policy);
        ckpt.adam_value = make_adam(ckpt.value, config.lr_value);
        ckpt.rng_state = mix_seed(config.seed, 2);
        ckpt.episodes_done = 0;
        ckpt.l_max = config.l_max;
        ckpt.swtct_weight = config.rules.swtct_weight;
        ckpt.overdue_penalty = config.overdue_penalty;
        ckpt.discount = config.discount;
        ckpt.target_mix = config.target_mix;
    }

    Rng rng(ckpt.rng_state);
    const double eta = config.discount;
    const double lambda = config.target_mix;
    const RuleParams rules = config.rules;

    for (int e = 0; e < config.episodes; ++e) {
        const std::int64_t episode_index = ckpt.episodes_done;
        Instance inst = episode_instance(config, episode_index);
        EnvState state = reset(inst);

        double reward_sum = 0.0;
        double abs_td_sum = 0.0;
        int steps = 0;

        bool terminal = is_terminal(state);
        std::array<Candidate, kRuleCount> sel{};
        std::vector<double> x;
        if (!terminal) {
            sel = select_all(state, rules);
            x = flatten(encode_with_selection(state, config.l_max, sel));
        }
        while (!terminal) {
            const ActionMask mask = action_mask(state);
            const auto probs = policy_forward(ckpt.policy, x, mask);

            Transition tr;
            tr.features = std::move(x);
            tr.action = sample_action(probs, mask, rng.next_double());
            tr.reward = apply_step(state, sel[tr.action], config.overdue_penalty);
            terminal = is_terminal(state);
            tr.terminal = terminal;
            if (terminal) {
                tr.next_features = flatten(encode(state, config.l_max, rules));
            } else {
                sel = select_all(state, rules);
                tr.next_features = flatten(encode_with_selection(state, config.l_max, sel));
            }

            const double v_t = value_forward(ckpt.value, tr.features);
            const double v_next = terminal ? 0.0 : value_forward(ckpt.target, tr.next_features);
            const double y = td_target(tr.reward, v_next, eta, terminal);
            const double delta = v_t - y;

            // w <- w - gamma1 * delta * grad v;  theta <- theta - gamma2 * delta * grad ln pi
            MlpGrads vg = value_grad(ckpt.value, tr.features);
            scale_grads(vg, delta);
            adam_step(ckpt.value, vg, ckpt.adam_value);

            MlpGrads pg = policy_grad_logprob(ckpt.policy, tr.features, mask, tr.action);
            scale_grads(pg, delta);
            adam_step(ckpt.policy, pg, ckpt.adam_policy);

            soft_update(ckpt.value, ckpt.target, lambda);

            reward_sum += tr.reward;
            abs_td_sum += std::abs(delta);
            ++steps;
            x = std::move(tr.next_features);
        }

        EpisodeLogRow row;
        row.episode = static_cast<int>(episode_index);
        row.episode_return = reward_sum;
        row.changeover_total = state.changeover_total();
        row.tardiness_total = state.tardiness_total();
        row.overdue_count = state.overdue_count();
        row.mean_abs_td = steps > 0 ? abs_td_sum / steps : 0.0;
        result.log.push_back(row);
        if (config.record_schedules) result.schedules.push_back(state.schedule());

        ++ckpt.episodes_done;
    }
    ckpt.rng_state = rng.state();
    return result;
}

std::pair<Schedule, EpisodeStats> greedy_dispatch(const Checkpoint& ckpt, const Instance& inst) {
    RuleParams rules{ckpt.swtct_weight};
    EnvState state = reset(inst);
    EpisodeStats stats;
    while (!is_terminal(state)) {
        auto sel = select_all(state, rules);
        auto x = flatten(encode_with_selection(state, ckpt.l_max, sel));
        const ActionMask mask = action_mask(state);
        const auto probs = policy_forward(ckpt.policy, x, mask);
        int best = -1;
        for (int k = 0; k < kRuleCount; ++k) {
            if (!mask.allowed[k]) continue;
            if (best < 0 || probs[k] > probs[best]) best = k;
        }
        stats.rewards.push_back(apply_step(state, sel[best], ckpt.overdue_penalty));
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

}  // namespace flexline
