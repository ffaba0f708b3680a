#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flexline/a2c.hpp"
#include "flexline/bench.hpp"
#include "flexline/milp.hpp"
#include "flexline/shield.hpp"

namespace py = pybind11;
using namespace flexline;

namespace {

FeatureMatrix encode_state(const EnvState& state, int l_max) { return encode(state, l_max); }

std::vector<std::vector<double>> matrix_rows(const FeatureMatrix& m) {
    std::vector<std::vector<double>> rows(m.rows, std::vector<double>(m.cols));
    for (int r = 0; r < m.rows; ++r) {
        for (int c = 0; c < m.cols; ++c) rows[r][c] = m.at(r, c);
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "scheduling engine for distributed flexible assembly lines";

    py::class_<Job>(m, "Job")
        .def_readonly("id", &Job::id)
        .def_readonly("demand_lot", &Job::demand_lot)
        .def_readonly("demand_day", &Job::demand_day);

    py::class_<Line>(m, "Line")
        .def_readonly("id", &Line::id)
        .def_readonly("setup_hours", &Line::setup_hours);

    py::class_<Instance, std::shared_ptr<Instance>>(m, "Instance")
        .def_property_readonly("job_count", &Instance::job_count)
        .def_property_readonly("line_count", &Instance::line_count)
        .def_readonly("horizon_days", &Instance::horizon_days)
        .def_readonly("jobs", &Instance::jobs)
        .def_readonly("lines", &Instance::lines)
        .def_readonly("rate", &Instance::rate)
        .def_readonly("eligible", &Instance::eligible)
        .def("processing_hours", &Instance::processing_hours)
        .def("__eq__", [](const Instance& a, const Instance& b) { return a == b; });

    py::class_<GeneratorSpec>(m, "GeneratorSpec")
        .def(py::init([](int jobs, int lines, int days, int flex_lo, int flex_hi,
                         std::uint64_t seed) {
                 GeneratorSpec spec;
                 spec.num_jobs = jobs;
                 spec.num_lines = lines;
                 spec.horizon_days = days;
                 spec.flexibility_lo = flex_lo;
                 spec.flexibility_hi = flex_hi;
                 spec.seed = seed;
                 return spec;
             }),
             py::arg("jobs"), py::arg("lines"), py::arg("days"), py::arg("flex_lo") = 1,
             py::arg("flex_hi") = 1 << 20, py::arg("seed") = 0)
        .def_readwrite("num_jobs", &GeneratorSpec::num_jobs)
        .def_readwrite("num_lines", &GeneratorSpec::num_lines)
        .def_readwrite("horizon_days", &GeneratorSpec::horizon_days)
        .def_readwrite("seed", &GeneratorSpec::seed);

    m.def("tiny1", &tiny1);
    m.def("generate", [](const GeneratorSpec& spec) { return generate(spec); });
    m.def("generator_spec_from_json", &parse_generator_spec);
    m.def("validate", [](const Instance& inst) {
        std::vector<std::string> out;
        for (const Violation& v : validate(inst)) out.push_back(v.field + ": " + v.message);
        return out;
    });
    m.def("save", &save);
    m.def("load", &load);

    py::class_<ScheduledTask>(m, "ScheduledTask")
        .def_readonly("job", &ScheduledTask::job)
        .def_readonly("line", &ScheduledTask::line)
        .def_readonly("position", &ScheduledTask::position)
        .def_readonly("changeover_hours", &ScheduledTask::changeover_hours)
        .def_readonly("start_hours", &ScheduledTask::start_hours)
        .def_readonly("processing_hours", &ScheduledTask::processing_hours)
        .def_readonly("completion_hours", &ScheduledTask::completion_hours)
        .def_readonly("tardiness_hours", &ScheduledTask::tardiness_hours);

    py::class_<Candidate>(m, "Candidate")
        .def_readonly("job", &Candidate::job)
        .def_readonly("line", &Candidate::line)
        .def_readonly("changeover_hours", &Candidate::changeover_hours)
        .def_readonly("start_hours", &Candidate::start_hours)
        .def_readonly("processing_hours", &Candidate::processing_hours)
        .def_readonly("completion_hours", &Candidate::completion_hours)
        .def_readonly("tardiness_hours", &Candidate::tardiness_hours);

    py::class_<EnvState>(m, "EnvState")
        .def_property_readonly("step_count", &EnvState::step_count)
        .def_property_readonly("remaining_count", &EnvState::remaining_count)
        .def_property_readonly("overdue_count", &EnvState::overdue_count)
        .def_property_readonly("changeover_total", &EnvState::changeover_total)
        .def_property_readonly("tardiness_total", &EnvState::tardiness_total)
        .def_property_readonly("schedule", &EnvState::schedule)
        .def("copy", [](const EnvState& s) { return EnvState(s); })
        .def("__eq__", [](const EnvState& a, const EnvState& b) { return a == b; });

    m.def("reset", [](const Instance& inst) { return reset(inst); });
    m.def("is_terminal", &is_terminal);
    m.def("make_candidate", &make_candidate);
    m.def(
        "step",
        [](const EnvState& state, const Candidate& c, double penalty) {
            return step(state, c, penalty);
        },
        py::arg("state"), py::arg("candidate"), py::arg("overdue_penalty") = 0.28);
    m.def("totals", &totals);
    m.def("check_constraints", [](const Instance& inst, const Schedule& schedule) {
        std::vector<std::string> out;
        for (const ConstraintViolation& v : check_constraints(inst, schedule).violations) {
            out.push_back("eq" + std::to_string(v.equation) + ": " + v.message);
        }
        return out;
    });
    m.def("save_schedule", &save_schedule);
    m.def("load_schedule", &load_schedule);

    m.def("rule_names", [] { return rule_names(); });
    m.def("enumerate_candidates", &enumerate_candidates);
    m.def(
        "select",
        [](const std::string& rule, const EnvState& state) {
            auto r = rule_from_name(rule);
            if (!r) throw std::invalid_argument("unknown rule " + rule);
            return select(*r, state);
        },
        py::arg("rule"), py::arg("state"));
    m.def(
        "dispatch_with_rule",
        [](const Instance& inst, const std::string& rule) {
            auto r = rule_from_name(rule);
            if (!r) throw std::invalid_argument("unknown rule " + rule);
            return dispatch_with_rule(inst, *r).first;
        },
        py::arg("instance"), py::arg("rule"));

    m.def(
        "encode",
        [](const EnvState& state, int l_max) { return matrix_rows(encode_state(state, l_max)); },
        py::arg("state"), py::arg("l_max") = 8);

    py::class_<EpisodeStats>(m, "EpisodeStats")
        .def_readonly("rewards", &EpisodeStats::rewards)
        .def_readonly("returns", &EpisodeStats::returns)
        .def_readonly("changeover_total", &EpisodeStats::changeover_total)
        .def_readonly("tardiness_total", &EpisodeStats::tardiness_total)
        .def_readonly("overdue_count", &EpisodeStats::overdue_count)
        .def("total_reward", &EpisodeStats::total_reward);

    py::class_<Checkpoint>(m, "Checkpoint")
        .def_property_readonly("episodes_done",
                               [](const Checkpoint& c) { return c.episodes_done; })
        .def_readonly("l_max", &Checkpoint::l_max)
        .def("__eq__", [](const Checkpoint& a, const Checkpoint& b) { return a == b; });

    m.def(
        "train",
        [](const Instance& inst, int episodes, std::uint64_t seed, int l_max,
           std::vector<int> hidden, double penalty, const Checkpoint* resume) {
            TrainConfig config;
            config.fixed_instance = inst;
            config.episodes = episodes;
            config.seed = seed;
            config.l_max = l_max;
            config.hidden = std::move(hidden);
            config.overdue_penalty = penalty;
            TrainResult result = train(config, resume);
            py::dict log;
            std::vector<double> returns;
            std::vector<double> tardiness;
            for (const EpisodeLogRow& row : result.log) {
                returns.push_back(row.episode_return);
                tardiness.push_back(row.tardiness_total);
            }
            log["returns"] = returns;
            log["tardiness"] = tardiness;
            return py::make_tuple(result.checkpoint, log);
        },
        py::arg("instance"), py::arg("episodes"), py::arg("seed"), py::arg("l_max") = 8,
        py::arg("hidden") = std::vector<int>{64, 64}, py::arg("overdue_penalty") = 0.28,
        py::arg("resume") = nullptr);
    m.def("save_checkpoint",
          [](const Checkpoint& c) { return py::bytes(save_checkpoint(c)); });
    m.def("load_checkpoint",
          [](const py::bytes& b) { return load_checkpoint(std::string(b)); });
    m.def("greedy_dispatch", &greedy_dispatch);

    m.def(
        "shielded_dispatch",
        [](const Instance& inst, const Checkpoint& ckpt, int rollouts, double alpha, double beta,
           std::uint64_t seed, int threads) {
            ShieldConfig config;
            config.rollouts = rollouts;
            config.alpha = alpha;
            config.beta = beta;
            config.seed = seed;
            config.threads = threads;
            return shielded_dispatch(inst, ckpt, config);
        },
        py::arg("instance"), py::arg("checkpoint"), py::arg("rollouts") = 1200,
        py::arg("alpha") = 0.95, py::arg("beta") = 0.33, py::arg("seed") = 0,
        py::arg("threads") = 1);

    m.def(
        "export_lp",
        [](const Instance& inst, int positions, double big_m) {
            MilpExportConfig config;
            config.positions_per_line = positions;
            config.big_m = big_m;
            return export_lp(inst, config);
        },
        py::arg("instance"), py::arg("positions_per_line") = 0, py::arg("big_m") = 0.0);
    m.def("auto_big_m", &auto_big_m);
    m.def(
        "exact_solve",
        [](const Instance& inst, int max_jobs, int max_lines) {
            ExactSolution sol = exact_solve(inst, {max_jobs, max_lines});
            return py::make_tuple(sol.schedule, sol.obj1, sol.obj2);
        },
        py::arg("instance"), py::arg("max_jobs") = 8, py::arg("max_lines") = 3);

    m.def("dcl", &dcl);
    m.def("dtl", &dtl);
    m.def("gantt_svg", &gantt_svg);
}
