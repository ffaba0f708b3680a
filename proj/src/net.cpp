#include "flexline/net.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "flexline/rng.hpp"

namespace flexline {

namespace {

std::vector<std::pair<int, int>> layer_shapes(const MlpDescriptor& desc) {
    std::vector<std::pair<int, int>> shapes;  // (out, in)
    int in = desc.input_dim;
    for (int h : desc.hidden) {
        shapes.emplace_back(h, in);
        in = h;
    }
    shapes.emplace_back(desc.output_dim, in);
    return shapes;
}

void check_input(const MlpParams& params, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != params.desc.input_dim) {
        throw std::invalid_argument("mlp: input size mismatch");
    }
}

// act[0] = x, act[l+1] = output of layer l (tanh on hidden, linear on last).
struct ForwardCache {
    std::vector<std::vector<double>> act;
};

std::vector<double> run_forward(const MlpParams& params, const std::vector<double>& x,
                                ForwardCache* cache) {
    if (cache) cache->act.push_back(x);
    std::vector<double> cur = x;
    const int layers = static_cast<int>(params.weights.size());
    for (int l = 0; l < layers; ++l) {
        const auto& w = params.weights[l];
        const auto& b = params.biases[l];
        const int out = static_cast<int>(b.size());
        const int in = static_cast<int>(cur.size());
        std::vector<double> next(out);
        for (int r = 0; r < out; ++r) {
            double acc = b[r];
            const double* row = w.data() + static_cast<std::size_t>(r) * in;
            for (int c = 0; c < in; ++c) acc += row[c] * cur[c];
            next[r] = (l + 1 < layers) ? std::tanh(acc) : acc;
        }
        cur = std::move(next);
        if (cache) cache->act.push_back(cur);
    }
    return cur;
}

// Backpropagates d(scalar)/d(output) through the cached forward pass.
MlpGrads run_backward(const MlpParams& params, const ForwardCache& cache,
                      std::vector<double> dout) {
    MlpGrads grads = zeros_like(params);
    const int layers = static_cast<int>(params.weights.size());
    for (int l = layers - 1; l >= 0; --l) {
        const auto& input = cache.act[l];
        const int out = static_cast<int>(params.biases[l].size());
        const int in = static_cast<int>(input.size());
        auto& gw = grads.weights[l];
        auto& gb = grads.biases[l];
        for (int r = 0; r < out; ++r) {
            gb[r] = dout[r];
            double* grow = gw.data() + static_cast<std::size_t>(r) * in;
            for (int c = 0; c < in; ++c) grow[c] = dout[r] * input[c];
        }
        if (l == 0) break;
        const auto& w = params.weights[l];
        std::vector<double> dprev(in, 0.0);
        for (int r = 0; r < out; ++r) {
            const double* row = w.data() + static_cast<std::size_t>(r) * in;
            for (int c = 0; c < in; ++c) dprev[c] += row[c] * dout[r];
        }
        // input here is the tanh output of layer l-1
        for (int c = 0; c < in; ++c) dprev[c] *= 1.0 - input[c] * input[c];
        dout = std::move(dprev);
    }
    return grads;
}

struct SoftmaxParts {
    double max_logit;
    double log_denom;  // log sum of exp(logit - max) over allowed entries
};

SoftmaxParts masked_parts(const std::vector<double>& logits, const ActionMask& mask) {
    double mx = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (int k = 0; k < kRuleCount; ++k) {
        if (mask.allowed[k]) {
            any = true;
            mx = std::max(mx, logits[k]);
        }
    }
    if (!any) throw std::invalid_argument("policy: mask allows no action");
    double denom = 0.0;
    for (int k = 0; k < kRuleCount; ++k) {
        if (mask.allowed[k]) denom += std::exp(logits[k] - mx);
    }
    return {mx, std::log(denom)};
}

std::array<double, kRuleCount> masked_probs(const std::vector<double>& logits,
                                            const ActionMask& mask) {
    SoftmaxParts parts = masked_parts(logits, mask);
    std::array<double, kRuleCount> probs{};
    for (int k = 0; k < kRuleCount; ++k) {
        probs[k] = mask.allowed[k] ? std::exp(logits[k] - parts.max_logit - parts.log_denom) : 0.0;
    }
    return probs;
}

}  // namespace

MlpParams init(const MlpDescriptor& desc, std::uint64_t seed, double sigma) {
    if (desc.input_dim < 1 || desc.output_dim < 1) {
        throw std::invalid_argument("mlp: descriptor dimensions must be positive");
    }
    for (int h : desc.hidden) {
        if (h < 1) throw std::invalid_argument("mlp: hidden sizes must be positive");
    }
    Rng rng(seed);
    MlpParams params;
    params.desc = desc;
    for (auto [out, in] : layer_shapes(desc)) {
        std::vector<double> w(static_cast<std::size_t>(out) * in);
        std::vector<double> b(out);
        for (double& v : w) v = rng.gaussian(0.0, sigma);
        for (double& v : b) v = rng.gaussian(0.0, sigma);
        params.weights.push_back(std::move(w));
        params.biases.push_back(std::move(b));
    }
    return params;
}

MlpGrads zeros_like(const MlpParams& params) {
    MlpGrads z;
    z.desc = params.desc;
    for (const auto& w : params.weights) z.weights.emplace_back(w.size(), 0.0);
    for (const auto& b : params.biases) z.biases.emplace_back(b.size(), 0.0);
    return z;
}

std::vector<double> forward(const MlpParams& params, const std::vector<double>& x) {
    check_input(params, x);
    return run_forward(params, x, nullptr);
}

std::array<double, kRuleCount> policy_forward(const MlpParams& params,
                                              const std::vector<double>& x,
                                              const ActionMask& mask) {
    check_input(params, x);
    if (params.desc.output_dim != kRuleCount) {
        throw std::invalid_argument("policy: output head must have 10 logits");
    }
    return masked_probs(run_forward(params, x, nullptr), mask);
}

double policy_log_prob(const MlpParams& params, const std::vector<double>& x,
                       const ActionMask& mask, int action) {
    check_input(params, x);
    if (action < 0 || action >= kRuleCount || !mask.allowed[action]) {
        throw std::invalid_argument("policy: action not allowed by mask");
    }
    auto logits = run_forward(params, x, nullptr);
    SoftmaxParts parts = masked_parts(logits, mask);
    return logits[action] - parts.max_logit - parts.log_denom;
}

MlpGrads policy_grad_logprob(const MlpParams& params, const std::vector<double>& x,
                             const ActionMask& mask, int action) {
    check_input(params, x);
    if (action < 0 || action >= kRuleCount || !mask.allowed[action]) {
        throw std::invalid_argument("policy: action not allowed by mask");
    }
    ForwardCache cache;
    auto logits = run_forward(params, x, &cache);
    auto probs = masked_probs(logits, mask);
    std::vector<double> dlogits(kRuleCount, 0.0);
    for (int k = 0; k < kRuleCount; ++k) {
        if (mask.allowed[k]) dlogits[k] = (k == action ? 1.0 : 0.0) - probs[k];
    }
    return run_backward(params, cache, std::move(dlogits));
}

double value_forward(const MlpParams& params, const std::vector<double>& x) {
    check_input(params, x);
    if (params.desc.output_dim != 1) {
        throw std::invalid_argument("value: output head must be scalar");
    }
    return run_forward(params, x, nullptr)[0];
}

MlpGrads value_grad(const MlpParams& params, const std::vector<double>& x) {
    check_input(params, x);
    ForwardCache cache;
    run_forward(params, x, &cache);
    return run_backward(params, cache, std::vector<double>{1.0});
}

AdamState make_adam(const MlpParams& params, double learning_rate) {
    AdamState state;
    state.learning_rate = learning_rate;
    state.m = zeros_like(params);
    state.v = zeros_like(params);
    return state;
}

void adam_step(MlpParams& params, const MlpGrads& grads, AdamState& state) {
    if (grads.weights.size() != params.weights.size()) {
        throw std::invalid_argument("adam: gradient shape mismatch");
    }
    ++state.step;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    auto update = [&](std::vector<double>& p, const std::vector<double>& g,
                      std::vector<double>& m, std::vector<double>& v) {
        if (g.size() != p.size()) throw std::invalid_argument("adam: gradient shape mismatch");
        for (std::size_t k = 0; k < p.size(); ++k) {
            m[k] = state.beta1 * m[k] + (1.0 - state.beta1) * g[k];
            v[k] = state.beta2 * v[k] + (1.0 - state.beta2) * g[k] * g[k];
            const double mhat = m[k] / bc1;
            const double vhat = v[k] / bc2;
            p[k] -= state.learning_rate * mhat / (std::sqrt(vhat) + state.epsilon);
        }
    };
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        update(params.weights[l], grads.weights[l], state.m.weights[l], state.v.weights[l]);
        update(params.biases[l], grads.biases[l], state.m.biases[l], state.v.biases[l]);
    }
}

void soft_update(const MlpParams& online, MlpParams& target, double lambda) {
    if (online.weights.size() != target.weights.size()) {
        throw std::invalid_argument("soft_update: shape mismatch");
    }
    auto blend = [lambda](const std::vector<double>& src, std::vector<double>& dst) {
        if (src.size() != dst.size()) throw std::invalid_argument("soft_update: shape mismatch");
        for (std::size_t k = 0; k < src.size(); ++k) {
            dst[k] = lambda * src[k] + (1.0 - lambda) * dst[k];
        }
    };
    for (std::size_t l = 0; l < online.weights.size(); ++l) {
        blend(online.weights[l], target.weights[l]);
        blend(online.biases[l], target.biases[l]);
    }
}

}  // namespace flexline
