#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "flexline/rules.hpp"

namespace flexline {

// Feed-forward net: tanh hidden layers, linear output head. Double precision
// throughout; gradients are hand-derived for this fixed architecture.
struct MlpDescriptor {
    int input_dim = 0;
    std::vector<int> hidden = {64, 64};
    int output_dim = 1;

    bool operator==(const MlpDescriptor&) const = default;
};

struct MlpParams {
    MlpDescriptor desc;
    // weights[l] is row-major out x in; biases[l] has length out.
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    bool operator==(const MlpParams&) const = default;
};

// Gradients and Adam moments share the parameter layout.
using MlpGrads = MlpParams;

MlpParams init(const MlpDescriptor& desc, std::uint64_t seed, double sigma = 0.1);
MlpGrads zeros_like(const MlpParams& params);

std::vector<double> forward(const MlpParams& params, const std::vector<double>& x);

// Masked softmax over the 10 action logits: masked entries are exactly 0,
// allowed entries are positive and sum to 1. Throws if nothing is allowed.
std::array<double, kRuleCount> policy_forward(const MlpParams& params,
                                              const std::vector<double>& x,
                                              const ActionMask& mask);

// ln pi(action | x) via log-sum-exp over the allowed logits.
double policy_log_prob(const MlpParams& params, const std::vector<double>& x,
                       const ActionMask& mask, int action);

// Exact gradient of ln pi(action | x) w.r.t. every parameter.
MlpGrads policy_grad_logprob(const MlpParams& params, const std::vector<double>& x,
                             const ActionMask& mask, int action);

double value_forward(const MlpParams& params, const std::vector<double>& x);
MlpGrads value_grad(const MlpParams& params, const std::vector<double>& x);

struct AdamState {
    double learning_rate = 3.8e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::int64_t step = 0;
    MlpGrads m;  // first moments
    MlpGrads v;  // second moments

    bool operator==(const AdamState&) const = default;
};

AdamState make_adam(const MlpParams& params, double learning_rate);

// One bias-corrected Adam step descending along `grads`. Callers wanting
// ascent negate the gradients.
void adam_step(MlpParams& params, const MlpGrads& grads, AdamState& state);

// target <- lambda * online + (1 - lambda) * target, elementwise.
void soft_update(const MlpParams& online, MlpParams& target, double lambda);

}  // namespace flexline
