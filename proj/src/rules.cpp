#include "flexline/rules.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <stdexcept>

namespace flexline {

const std::array<std::string, kRuleCount>& rule_names() {
    static const std::array<std::string, kRuleCount> names = {
        "SCT", "SPT", "STCT", "SWTCT", "LPT", "LTCT", "EDD", "ECT", "EST", "SRT"};
    return names;
}

std::string rule_name(Rule rule) { return rule_names()[static_cast<int>(rule)]; }

std::optional<Rule> rule_from_name(const std::string& name) {
    std::string upper = name;
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    const auto& names = rule_names();
    for (int k = 0; k < kRuleCount; ++k) {
        if (names[k] == upper) return static_cast<Rule>(k);
    }
    return std::nullopt;
}

std::vector<Candidate> enumerate_candidates(const EnvState& state) {
    const Instance& inst = state.instance();
    std::vector<Candidate> out;
    out.reserve(static_cast<std::size_t>(state.remaining_count()) * inst.line_count());
    for (int i = 0; i < inst.job_count(); ++i) {
        if (state.is_dispatched(i)) continue;
        for (int j = 0; j < inst.line_count(); ++j) {
            if (!inst.eligible[i][j]) continue;
            out.push_back(make_candidate(state, i, j));
        }
    }
    return out;
}

namespace {

// Primary and secondary sort keys, smaller wins; candidates arrive in
// (job, line) ascending order so strict improvement keeps the tie-break.
struct Key {
    double primary;
    double secondary;
    bool operator<(const Key& other) const {
        if (primary != other.primary) return primary < other.primary;
        return secondary < other.secondary;
    }
};

Key rule_key(Rule rule, const Candidate& c, const Instance& inst, const RuleParams& params) {
    const double due = 24.0 * inst.jobs[c.job].demand_day;
    switch (rule) {
        case Rule::Sct:
            return {c.changeover_hours, 0.0};
        case Rule::Spt:
            return {c.processing_hours, 0.0};
        case Rule::Stct:
            return {c.changeover_hours + c.processing_hours, 0.0};
        case Rule::Swtct:
            return {params.swtct_weight * c.changeover_hours + c.processing_hours, 0.0};
        case Rule::Lpt:
            return {-c.processing_hours, 0.0};
        case Rule::Ltct:
            return {-(c.changeover_hours + c.processing_hours), 0.0};
        case Rule::Edd:
            // Day-granular due dates are degenerate on their own; earliest
            // completion breaks the ties ahead of the job/line order.
            return {due, c.completion_hours};
        case Rule::Ect:
            return {c.completion_hours, 0.0};
        case Rule::Est:
            return {c.start_hours, 0.0};
        case Rule::Srt:
            return {due - c.completion_hours, 0.0};
    }
    throw std::logic_error("rule_key: unknown rule");
}

Candidate select_from(Rule rule, const std::vector<Candidate>& candidates, const Instance& inst,
                      const RuleParams& params) {
    const Candidate* best = nullptr;
    Key best_key{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (const Candidate& c : candidates) {
        Key key = rule_key(rule, c, inst, params);
        if (best == nullptr || key < best_key) {
            best = &c;
            best_key = key;
        }
    }
    if (best == nullptr) throw std::logic_error("select: no candidates at a non-terminal state");
    return *best;
}

}  // namespace

Candidate select(Rule rule, const EnvState& state, const RuleParams& params) {
    if (is_terminal(state)) throw std::invalid_argument("select: terminal state");
    auto candidates = enumerate_candidates(state);
    return select_from(rule, candidates, state.instance(), params);
}

std::array<Candidate, kRuleCount> select_all(const EnvState& state, const RuleParams& params) {
    if (is_terminal(state)) throw std::invalid_argument("select_all: terminal state");
    auto candidates = enumerate_candidates(state);
    std::array<Candidate, kRuleCount> out;
    for (int k = 0; k < kRuleCount; ++k) {
        out[k] = select_from(static_cast<Rule>(k), candidates, state.instance(), params);
    }
    return out;
}

ActionMask action_mask(const EnvState& state) {
    ActionMask mask;
    mask.allowed.fill(!is_terminal(state));
    return mask;
}

std::pair<Schedule, EnvState> dispatch_with_rule(const Instance& instance, Rule rule,
                                                 const RuleParams& params,
                                                 double overdue_penalty) {
    EnvState state = reset(instance);
    while (!is_terminal(state)) {
        Candidate c = select(rule, state, params);
        apply_step(state, c, overdue_penalty);
    }
    Schedule schedule = state.schedule();
    return {std::move(schedule), std::move(state)};
}

}  // namespace flexline
