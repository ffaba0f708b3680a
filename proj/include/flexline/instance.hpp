#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace flexline {

// One production order: a lot of demand_lot units due within day demand_day.
// Indices are 0-based in memory; files and reports print them 1-based.
struct Job {
    int id = 0;
    double demand_lot = 0.0;   // units
    int demand_day = 1;        // 1..horizon_days

    bool operator==(const Job&) const = default;
};

struct Line {
    int id = 0;
    double setup_hours = 0.0;

    bool operator==(const Line&) const = default;
};

struct Instance {
    std::vector<Job> jobs;
    std::vector<Line> lines;
    int horizon_days = 1;
    // rate[i][j]: units per hour of job i on line j (0 when ineligible).
    std::vector<std::vector<double>> rate;
    std::vector<std::vector<bool>> eligible;
    // changeover[a][i][j]: hours to switch line j onto job i when job a-1 ran
    // before it; row a = 0 is the initial changeover into job i.
    std::vector<std::vector<std::vector<double>>> changeover;

    int job_count() const { return static_cast<int>(jobs.size()); }
    int line_count() const { return static_cast<int>(lines.size()); }
    double horizon_hours() const { return 24.0 * horizon_days; }

    // Processing hours of job i on line j (requires eligibility).
    double processing_hours(int job, int line) const {
        return jobs[job].demand_lot / rate[job][line];
    }
    double initial_changeover(int job, int line) const { return changeover[0][job][line]; }
    double changeover_between(int from_job, int to_job, int line) const {
        return changeover[from_job + 1][to_job][line];
    }

    bool operator==(const Instance&) const = default;
};

struct Violation {
    std::string field;
    std::string message;
    int i = -1;  // job index, -1 when not applicable
    int j = -1;  // line index, -1 when not applicable
};

// Empty result means every Instance invariant holds.
std::vector<Violation> validate(const Instance& instance);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct GeneratorSpec {
    int num_jobs = 1;
    int num_lines = 1;
    int horizon_days = 1;
    int flexibility_lo = 1;  // eligible lines per job, clamped to num_lines
    int flexibility_hi = 1;
    Interval rate_range{5.0, 20.0};                 // units/hour
    Interval changeover_range{0.5, 6.0};            // hours
    Interval initial_changeover_range{0.5, 3.0};    // hours
    Interval setup_range{0.5, 2.0};                 // hours
    Interval lot_range{20.0, 300.0};                // units
    std::uint64_t seed = 0;
};

struct GeneratorNotes {
    bool flexibility_clamped = false;
    int clamped_hi = 0;
};

// Seeded benchmark instance. Pure function of the spec: equal specs yield
// byte-identical instances. Throws std::invalid_argument on bad specs.
Instance generate(const GeneratorSpec& spec, GeneratorNotes* notes = nullptr);

// JSON round trip; load(save(x)) == x exactly. load throws
// std::runtime_error naming the first offending field, for structural
// problems and invariant violations alike. load_lenient checks structure
// only, leaving invariants to validate() (the `validate` CLI path).
std::string save(const Instance& instance);
Instance load(const std::string& text);
Instance load_lenient(const std::string& text);

// Generator spec from JSON: {"jobs", "lines", "days", "seed", optional
// "flexibility" [lo,hi] and range pairs "rate", "changeover",
// "initial_changeover", "setup", "lot"}.
GeneratorSpec parse_generator_spec(const std::string& json_text);

// The three-job two-line fixture used across the test suites.
Instance tiny1();

}  // namespace flexline
