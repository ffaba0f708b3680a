#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flexline/encoder.hpp"
#include "flexline/net.hpp"

namespace flexline {

struct Transition {
    std::vector<double> features;
    int action = 0;
    double reward = 0.0;
    std::vector<double> next_features;
    bool terminal = false;
};

struct TrainConfig {
    int episodes = 1000;
    double discount = 0.95;       // eta
    double target_mix = 0.7;      // lambda
    double lr_value = 3.8e-4;     // gamma_1
    double lr_policy = 3.8e-4;    // gamma_2
    double overdue_penalty = 0.28;
    std::uint64_t seed = 0;
    // Exactly one source: a fixed instance, or a fresh seeded instance per
    // episode from the generator spec.
    std::optional<Instance> fixed_instance;
    std::optional<GeneratorSpec> generator;
    int l_max = 8;
    RuleParams rules;
    std::vector<int> hidden = {64, 64};
    // Keep every episode's schedule in the result (reward-accounting audits).
    bool record_schedules = false;
};

struct EpisodeStats {
    std::vector<double> rewards;
    std::vector<double> returns;    // discounted reward-to-go per step
    std::vector<double> td_errors;  // zeros outside training
    double changeover_total = 0.0;
    double tardiness_total = 0.0;
    int overdue_count = 0;

    double total_reward() const {
        double s = 0.0;
        for (double r : rewards) s += r;
        return s;
    }
};

struct EpisodeLogRow {
    int episode = 0;
    double episode_return = 0.0;  // undiscounted sum of step rewards
    double changeover_total = 0.0;
    double tardiness_total = 0.0;
    int overdue_count = 0;
    double mean_abs_td = 0.0;
};

// Everything needed to resume training or to dispatch: networks, optimizer
// state, the RNG stream position, and the feature/reward configuration.
struct Checkpoint {
    MlpParams policy;
    MlpParams value;
    MlpParams target;
    AdamState adam_policy;
    AdamState adam_value;
    std::uint64_t rng_state = 0;
    std::int64_t episodes_done = 0;
    int l_max = 8;
    double swtct_weight = 2.0;
    double overdue_penalty = 0.28;
    double discount = 0.95;
    double target_mix = 0.7;

    bool operator==(const Checkpoint&) const = default;
};

struct TrainResult {
    Checkpoint checkpoint;
    std::vector<EpisodeLogRow> log;
    std::vector<Schedule> schedules;  // filled when record_schedules is set
};

double td_target(double reward, double v_next_target, double eta, bool terminal);

// The online loop: one value, one policy, and one target update per
// environment step. Deterministic in the seed. Passing `resume` continues an
// earlier run (its RNG position and episode counter carry over) and must be
// bitwise-equal to having trained the combined episode count in one call.
TrainResult train(const TrainConfig& config, const Checkpoint* resume = nullptr);

// Argmax-policy dispatch; ties break to the lowest action index.
std::pair<Schedule, EpisodeStats> greedy_dispatch(const Checkpoint& checkpoint,
                                                  const Instance& instance);

// Samples an action index from masked probabilities by inverse CDF.
int sample_action(const std::array<double, kRuleCount>& probs, const ActionMask& mask, double u);

std::string training_log_csv(const std::vector<EpisodeLogRow>& rows);

// Bitwise round trip: load_checkpoint(save_checkpoint(x)) == x.
std::string save_checkpoint(const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::string& bytes);

}  // namespace flexline
