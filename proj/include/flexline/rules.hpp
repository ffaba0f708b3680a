#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "flexline/env.hpp"

namespace flexline {

// The ten priority dispatching rules, in their fixed listing order. The rule
// index IS the agent's action index.
enum class Rule {
    Sct,    // shortest changeover timespan
    Spt,    // shortest processing timespan
    Stct,   // shortest total consuming timespan
    Swtct,  // shortest weighted total consuming timespan
    Lpt,    // longest processing timespan
    Ltct,   // longest total consuming timespan
    Edd,    // earliest due date
    Ect,    // earliest completion time
    Est,    // earliest start time
    Srt,    // shortest relaxation timespan
};

inline constexpr int kRuleCount = 10;

const std::array<std::string, kRuleCount>& rule_names();
std::string rule_name(Rule rule);
// Case-insensitive; returns nullopt for unknown names.
std::optional<Rule> rule_from_name(const std::string& name);

struct RuleParams {
    // SWTCT weight on the changeover term; processing keeps weight 1.
    double swtct_weight = 2.0;
};

struct ActionMask {
    std::array<bool, kRuleCount> allowed{};
};

// One candidate per (remaining job, eligible line) pair, job-major order.
std::vector<Candidate> enumerate_candidates(const EnvState& state);

// Extremal candidate under the rule's key; ties break to the lowest job then
// lowest line index. Throws at terminal states.
Candidate select(Rule rule, const EnvState& state, const RuleParams& params = {});

// All ten selections from a single candidate enumeration.
std::array<Candidate, kRuleCount> select_all(const EnvState& state,
                                             const RuleParams& params = {});

// All-true at non-terminal states, all-false at terminal ones.
ActionMask action_mask(const EnvState& state);

// Runs one rule to termination.
std::pair<Schedule, EnvState> dispatch_with_rule(const Instance& instance, Rule rule,
                                                 const RuleParams& params = {},
                                                 double overdue_penalty = 0.28);

}  // namespace flexline
