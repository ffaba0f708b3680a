#include "flexline/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "flexline/rng.hpp"
#include "json.hpp"

namespace flexline {

namespace {

std::string idx1(int i) { return std::to_string(i + 1); }

void check_interval(const Interval& iv, const char* name) {
    if (!(iv.lo <= iv.hi)) {
        throw std::invalid_argument(std::string(name) + ": empty interval");
    }
}

}  // namespace

std::vector<Violation> validate(const Instance& inst) {
    std::vector<Violation> out;
    const int I = inst.job_count();
    const int J = inst.line_count();

    auto add = [&out](std::string field, std::string msg, int i = -1, int j = -1) {
        out.push_back({std::move(field), std::move(msg), i, j});
    };

    if (inst.horizon_days < 1) {
        add("horizon_days", "horizon_days must be positive");
        return out;
    }
    auto dims_ok = [&](const auto& m) {
        if (static_cast<int>(m.size()) != I) return false;
        for (const auto& row : m) {
            if (static_cast<int>(row.size()) != J) return false;
        }
        return true;
    };
    if (!dims_ok(inst.rate)) {
        add("rate", "rate must be an IxJ matrix");
        return out;
    }
    if (!dims_ok(inst.eligible)) {
        add("eligible", "eligible must be an IxJ matrix");
        return out;
    }
    if (static_cast<int>(inst.changeover.size()) != I + 1) {
        add("changeover", "changeover must have I+1 rows");
        return out;
    }
    for (const auto& row : inst.changeover) {
        if (!dims_ok(row)) {
            add("changeover", "changeover rows must be IxJ matrices");
            return out;
        }
    }

    for (int i = 0; i < I; ++i) {
        if (!(inst.jobs[i].demand_lot > 0.0)) {
            add("demand_lot", "job " + idx1(i) + " demand_lot must be > 0", i);
        }
        if (inst.jobs[i].demand_day < 1 || inst.jobs[i].demand_day > inst.horizon_days) {
            add("demand_day", "job " + idx1(i) + " demand_day outside 1.." +
                                  std::to_string(inst.horizon_days),
                i);
        }
    }
    for (int j = 0; j < J; ++j) {
        if (!(inst.lines[j].setup_hours >= 0.0)) {
            add("setup_hours", "line " + idx1(j) + " setup_hours must be >= 0", -1, j);
        }
    }
    for (int i = 0; i < I; ++i) {
        bool any = false;
        for (int j = 0; j < J; ++j) {
            if (inst.eligible[i][j]) {
                any = true;
                if (!(inst.rate[i][j] > 0.0)) {
                    add("rate", "job " + idx1(i) + " eligible on line " + idx1(j) +
                                    " but rate is not positive",
                        i, j);
                }
            }
            if (!(inst.rate[i][j] >= 0.0) || !std::isfinite(inst.rate[i][j])) {
                add("rate", "rate[" + idx1(i) + "][" + idx1(j) + "] must be finite and >= 0",
                    i, j);
            }
        }
        if (!any) {
            add("eligible", "job " + idx1(i) + " has no eligible line", i);
        }
    }
    for (int a = 0; a <= I; ++a) {
        for (int i = 0; i < I; ++i) {
            for (int j = 0; j < J; ++j) {
                double c = inst.changeover[a][i][j];
                if (!std::isfinite(c) || c < 0.0) {
                    add("changeover", "changeover[" + std::to_string(a) + "][" + idx1(i) +
                                          "][" + idx1(j) + "] must be finite and >= 0",
                        i, j);
                }
            }
        }
    }
    return out;
}

Instance generate(const GeneratorSpec& spec, GeneratorNotes* notes) {
    if (spec.num_jobs < 1 || spec.num_lines < 1 || spec.horizon_days < 1) {
        throw std::invalid_argument("generator: sizes must be positive");
    }
    if (spec.flexibility_lo < 1 || spec.flexibility_lo > spec.flexibility_hi) {
        throw std::invalid_argument("generator: invalid flexibility range");
    }
    if (spec.flexibility_lo > spec.num_lines) {
        throw std::invalid_argument("generator: flexibility lower bound exceeds line count");
    }
    check_interval(spec.rate_range, "rate_range");
    check_interval(spec.changeover_range, "changeover_range");
    check_interval(spec.initial_changeover_range, "initial_changeover_range");
    check_interval(spec.setup_range, "setup_range");
    check_interval(spec.lot_range, "lot_range");
    if (!(spec.rate_range.lo > 0.0)) {
        throw std::invalid_argument("generator: rate_range must be positive");
    }
    if (spec.changeover_range.lo < 0.0 || spec.initial_changeover_range.lo < 0.0 ||
        spec.setup_range.lo < 0.0) {
        throw std::invalid_argument("generator: changeover/setup ranges must be >= 0");
    }
    if (!(spec.lot_range.lo > 0.0)) {
        throw std::invalid_argument("generator: lot_range must be positive");
    }

    const int I = spec.num_jobs;
    const int J = spec.num_lines;
    const int flex_hi = std::min(spec.flexibility_hi, J);
    if (notes) {
        notes->flexibility_clamped = flex_hi != spec.flexibility_hi;
        notes->clamped_hi = flex_hi;
    }

    Rng rng(spec.seed);
    Instance inst;
    inst.horizon_days = spec.horizon_days;
    inst.jobs.resize(I);
    inst.lines.resize(J);
    inst.rate.assign(I, std::vector<double>(J, 0.0));
    inst.eligible.assign(I, std::vector<bool>(J, false));
    inst.changeover.assign(I + 1, std::vector<std::vector<double>>(I, std::vector<double>(J, 0.0)));

    // Draw order is part of the determinism contract: lots and due days,
    // setups, eligibility, rates, then the changeover tensor.
    for (int i = 0; i < I; ++i) {
        inst.jobs[i].id = i;
        inst.jobs[i].demand_lot = rng.uniform(spec.lot_range.lo, spec.lot_range.hi);
        inst.jobs[i].demand_day = static_cast<int>(rng.uniform_int(1, spec.horizon_days));
    }
    for (int j = 0; j < J; ++j) {
        inst.lines[j].id = j;
        inst.lines[j].setup_hours = rng.uniform(spec.setup_range.lo, spec.setup_range.hi);
    }
    std::vector<int> perm(J);
    for (int i = 0; i < I; ++i) {
        int k = static_cast<int>(rng.uniform_int(spec.flexibility_lo, flex_hi));
        std::iota(perm.begin(), perm.end(), 0);
        // Partial Fisher-Yates; the first k entries are the eligible lines.
        for (int t = 0; t < k; ++t) {
            int u = t + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(J - t)));
            std::swap(perm[t], perm[u]);
            inst.eligible[i][perm[t]] = true;
        }
    }
    for (int i = 0; i < I; ++i) {
        for (int j = 0; j < J; ++j) {
            if (inst.eligible[i][j]) {
                inst.rate[i][j] = rng.uniform(spec.rate_range.lo, spec.rate_range.hi);
            }
        }
    }
    for (int a = 0; a <= I; ++a) {
        for (int i = 0; i < I; ++i) {
            for (int j = 0; j < J; ++j) {
                if (!inst.eligible[i][j]) continue;          // never read
                if (a == i + 1) continue;                    // diagonal, never read
                if (a == 0) {
                    inst.changeover[a][i][j] =
                        rng.uniform(spec.initial_changeover_range.lo, spec.initial_changeover_range.hi);
                } else if (inst.eligible[a - 1][j]) {
                    inst.changeover[a][i][j] =
                        rng.uniform(spec.changeover_range.lo, spec.changeover_range.hi);
                }
            }
        }
    }
    return inst;
}

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void schema_error(const std::string& field, const std::string& what) {
    throw std::runtime_error("instance schema: field \"" + field + "\": " + what);
}

double require_number(const ordered_json& v, const std::string& field) {
    if (!v.is_number()) schema_error(field, "expected a number");
    return v.get<double>();
}

int require_int(const ordered_json& v, const std::string& field) {
    if (!v.is_number_integer()) schema_error(field, "expected an integer");
    return v.get<int>();
}

const ordered_json& require_key(const ordered_json& obj, const std::string& key,
                                const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) schema_error(where.empty() ? key : where + "." + key, "missing");
    return *it;
}

void forbid_extra_keys(const ordered_json& obj, std::initializer_list<const char*> allowed,
                       const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) {
            if (it.key() == k) { ok = true; break; }
        }
        if (!ok) schema_error(where.empty() ? it.key() : where + "." + it.key(), "unexpected key");
    }
}

}  // namespace

std::string save(const Instance& inst) {
    ordered_json root;
    ordered_json jobs = ordered_json::array();
    for (const Job& job : inst.jobs) {
        ordered_json o;
        o["id"] = job.id + 1;
        o["demand_lot"] = job.demand_lot;
        o["demand_day"] = job.demand_day;
        jobs.push_back(std::move(o));
    }
    root["jobs"] = std::move(jobs);
    ordered_json lines = ordered_json::array();
    for (const Line& line : inst.lines) {
        ordered_json o;
        o["id"] = line.id + 1;
        o["setup_hours"] = line.setup_hours;
        lines.push_back(std::move(o));
    }
    root["lines"] = std::move(lines);
    root["horizon_days"] = inst.horizon_days;
    root["rate"] = inst.rate;
    root["eligible"] = inst.eligible;
    root["changeover"] = inst.changeover;
    return root.dump(2) + "\n";
}

Instance load_lenient(const std::string& text) {
    ordered_json root;
    try {
        root = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("instance schema: ") + e.what());
    }
    if (!root.is_object()) schema_error("<root>", "expected an object");
    forbid_extra_keys(root, {"jobs", "lines", "horizon_days", "rate", "eligible", "changeover"},
                      "");

    Instance inst;
    const auto& jobs = require_key(root, "jobs", "");
    if (!jobs.is_array() || jobs.empty()) schema_error("jobs", "expected a non-empty array");
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto& o = jobs[i];
        const std::string where = "jobs[" + std::to_string(i) + "]";
        if (!o.is_object()) schema_error(where, "expected an object");
        forbid_extra_keys(o, {"id", "demand_lot", "demand_day"}, where);
        Job job;
        job.id = require_int(require_key(o, "id", where), where + ".id") - 1;
        if (job.id != static_cast<int>(i)) schema_error(where + ".id", "ids must be 1..I in order");
        job.demand_lot = require_number(require_key(o, "demand_lot", where), where + ".demand_lot");
        job.demand_day = require_int(require_key(o, "demand_day", where), where + ".demand_day");
        inst.jobs.push_back(job);
    }
    const auto& lines = require_key(root, "lines", "");
    if (!lines.is_array() || lines.empty()) schema_error("lines", "expected a non-empty array");
    for (std::size_t j = 0; j < lines.size(); ++j) {
        const auto& o = lines[j];
        const std::string where = "lines[" + std::to_string(j) + "]";
        if (!o.is_object()) schema_error(where, "expected an object");
        forbid_extra_keys(o, {"id", "setup_hours"}, where);
        Line line;
        line.id = require_int(require_key(o, "id", where), where + ".id") - 1;
        if (line.id != static_cast<int>(j)) schema_error(where + ".id", "ids must be 1..J in order");
        line.setup_hours = require_number(require_key(o, "setup_hours", where), where + ".setup_hours");
        inst.lines.push_back(line);
    }
    inst.horizon_days = require_int(require_key(root, "horizon_days", ""), "horizon_days");
    if (inst.horizon_days < 1) schema_error("horizon_days", "must be positive");

    const int I = inst.job_count();
    const int J = inst.line_count();

    const auto& rate = require_key(root, "rate", "");
    if (!rate.is_array() || static_cast<int>(rate.size()) != I) {
        schema_error("rate", "expected I rows");
    }
    inst.rate.assign(I, std::vector<double>(J, 0.0));
    for (int i = 0; i < I; ++i) {
        if (!rate[i].is_array() || static_cast<int>(rate[i].size()) != J) {
            schema_error("rate[" + std::to_string(i) + "]", "expected J entries");
        }
        for (int j = 0; j < J; ++j) {
            inst.rate[i][j] = require_number(rate[i][j], "rate");
        }
    }
    const auto& eligible = require_key(root, "eligible", "");
    if (!eligible.is_array() || static_cast<int>(eligible.size()) != I) {
        schema_error("eligible", "expected I rows");
    }
    inst.eligible.assign(I, std::vector<bool>(J, false));
    for (int i = 0; i < I; ++i) {
        if (!eligible[i].is_array() || static_cast<int>(eligible[i].size()) != J) {
            schema_error("eligible[" + std::to_string(i) + "]", "expected J entries");
        }
        for (int j = 0; j < J; ++j) {
            if (!eligible[i][j].is_boolean()) schema_error("eligible", "expected booleans");
            inst.eligible[i][j] = eligible[i][j].get<bool>();
        }
    }
    const auto& chg = require_key(root, "changeover", "");
    if (!chg.is_array() || static_cast<int>(chg.size()) != I + 1) {
        schema_error("changeover", "expected I+1 rows");
    }
    inst.changeover.assign(I + 1, std::vector<std::vector<double>>(I, std::vector<double>(J, 0.0)));
    for (int a = 0; a <= I; ++a) {
        if (!chg[a].is_array() || static_cast<int>(chg[a].size()) != I) {
            schema_error("changeover[" + std::to_string(a) + "]", "expected I rows");
        }
        for (int i = 0; i < I; ++i) {
            if (!chg[a][i].is_array() || static_cast<int>(chg[a][i].size()) != J) {
                schema_error("changeover", "expected J entries per row");
            }
            for (int j = 0; j < J; ++j) {
                inst.changeover[a][i][j] = require_number(chg[a][i][j], "changeover");
            }
        }
    }
    return inst;
}

Instance load(const std::string& text) {
    Instance inst = load_lenient(text);
    auto violations = validate(inst);
    if (!violations.empty()) {
        schema_error(violations.front().field, violations.front().message);
    }
    return inst;
}

GeneratorSpec parse_generator_spec(const std::string& json_text) {
    ordered_json o;
    try {
        o = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("generator spec: ") + e.what());
    }
    GeneratorSpec spec;
    spec.num_jobs = o.at("jobs").get<int>();
    spec.num_lines = o.at("lines").get<int>();
    spec.horizon_days = o.at("days").get<int>();
    if (o.contains("flexibility")) {
        spec.flexibility_lo = o.at("flexibility").at(0).get<int>();
        spec.flexibility_hi = o.at("flexibility").at(1).get<int>();
    } else {
        spec.flexibility_lo = 1;
        spec.flexibility_hi = spec.num_lines;
    }
    auto interval = [&](const char* key, Interval fallback) {
        if (!o.contains(key)) return fallback;
        return Interval{o.at(key).at(0).get<double>(), o.at(key).at(1).get<double>()};
    };
    spec.rate_range = interval("rate", spec.rate_range);
    spec.changeover_range = interval("changeover", spec.changeover_range);
    spec.initial_changeover_range = interval("initial_changeover", spec.initial_changeover_range);
    spec.setup_range = interval("setup", spec.setup_range);
    spec.lot_range = interval("lot", spec.lot_range);
    spec.seed = o.at("seed").get<std::uint64_t>();
    return spec;
}

Instance tiny1() {
    Instance inst;
    inst.horizon_days = 2;
    inst.jobs = {{0, 40.0, 1}, {1, 200.0, 1}, {2, 30.0, 2}};
    inst.lines = {{0, 1.0}, {1, 1.0}};
    inst.rate = {{10.0, 8.0}, {12.0, 10.0}, {6.0, 10.0}};
    inst.eligible = {{true, true}, {true, true}, {true, true}};
    inst.changeover.assign(4, std::vector<std::vector<double>>(3, std::vector<double>(2, 2.0)));
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 2; ++j) {
            inst.changeover[0][i][j] = 1.0;       // initial changeovers
            inst.changeover[i + 1][i][j] = 0.0;   // diagonal, never read
        }
    }
    return inst;
}

}  // namespace flexline
