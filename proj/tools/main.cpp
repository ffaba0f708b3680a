// flexline: generate, inspect, train on, and dispatch assembly-line
// scheduling instances. Exit codes: 0 ok, 1 domain error, 2 usage error.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "flexline/a2c.hpp"
#include "flexline/bench.hpp"
#include "flexline/milp.hpp"
#include "flexline/shield.hpp"
#include "flexline/textio.hpp"
#include "json.hpp"

namespace fl = flexline;

namespace {

fl::Instance load_instance_file(const std::string& path) {
    return fl::load(fl::read_file(path));
}

fl::Checkpoint load_checkpoint_file(const std::string& path) {
    return fl::load_checkpoint(fl::read_file(path));
}

void print_schedule_summary(const fl::Schedule& schedule, const fl::Instance& inst) {
    auto [c, t] = fl::totals(schedule);
    std::cout << "changeover_total=" << fl::format_fixed(c, 3)
              << " tardiness_total=" << fl::format_fixed(t, 3)
              << " dcl=" << fl::format_fixed(fl::dcl(schedule, inst), 3)
              << " dtl=" << fl::format_fixed(fl::dtl(schedule, inst), 3) << "\n";
}

struct GenOptions {
    std::string spec_path;
    std::string out;
    fl::GeneratorSpec spec;
    bool seed_set = false;
};

struct TrainOptions {
    std::string config_path;
    std::string out;
    std::string log_path;
    std::string instance_path;
    std::string resume_path;
    int episodes = -1;
    std::optional<std::uint64_t> seed;
};

fl::TrainConfig parse_train_config(const std::string& text) {
    auto o = nlohmann::ordered_json::parse(text);
    fl::TrainConfig config;
    if (o.contains("episodes")) config.episodes = o.at("episodes").get<int>();
    if (o.contains("seed")) config.seed = o.at("seed").get<std::uint64_t>();
    if (o.contains("discount")) config.discount = o.at("discount").get<double>();
    if (o.contains("target_mix")) config.target_mix = o.at("target_mix").get<double>();
    if (o.contains("lr_value")) config.lr_value = o.at("lr_value").get<double>();
    if (o.contains("lr_policy")) config.lr_policy = o.at("lr_policy").get<double>();
    if (o.contains("penalty")) config.overdue_penalty = o.at("penalty").get<double>();
    if (o.contains("l_max")) config.l_max = o.at("l_max").get<int>();
    if (o.contains("swtct_weight")) config.rules.swtct_weight = o.at("swtct_weight").get<double>();
    if (o.contains("hidden")) config.hidden = o.at("hidden").get<std::vector<int>>();
    if (o.contains("instance")) {
        config.fixed_instance = load_instance_file(o.at("instance").get<std::string>());
    }
    if (o.contains("generator")) {
        config.generator = fl::parse_generator_spec(o.at("generator").dump());
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"distributed flexible assembly line scheduling toolkit"};
    app.require_subcommand(1);

    // --- gen ---
    GenOptions gen;
    auto* cmd_gen = app.add_subcommand("gen", "generate a seeded benchmark instance");
    cmd_gen->add_option("--spec", gen.spec_path, "generator spec JSON file");
    cmd_gen->add_option("--jobs", gen.spec.num_jobs, "number of jobs");
    cmd_gen->add_option("--lines", gen.spec.num_lines, "number of lines");
    cmd_gen->add_option("--days", gen.spec.horizon_days, "plan period in days");
    cmd_gen->add_option("--flex-lo", gen.spec.flexibility_lo, "min eligible lines per job");
    cmd_gen->add_option("--flex-hi", gen.spec.flexibility_hi,
                        "max eligible lines per job (clamped to --lines)");
    cmd_gen->add_option("--rate-lo", gen.spec.rate_range.lo, "rate range low (units/h)");
    cmd_gen->add_option("--rate-hi", gen.spec.rate_range.hi, "rate range high");
    cmd_gen->add_option("--changeover-lo", gen.spec.changeover_range.lo, "changeover low (h)");
    cmd_gen->add_option("--changeover-hi", gen.spec.changeover_range.hi, "changeover high");
    cmd_gen->add_option("--initial-changeover-lo", gen.spec.initial_changeover_range.lo,
                        "initial changeover low (h)");
    cmd_gen->add_option("--initial-changeover-hi", gen.spec.initial_changeover_range.hi,
                        "initial changeover high");
    cmd_gen->add_option("--setup-lo", gen.spec.setup_range.lo, "setup low (h)");
    cmd_gen->add_option("--setup-hi", gen.spec.setup_range.hi, "setup high");
    cmd_gen->add_option("--lot-lo", gen.spec.lot_range.lo, "lot low (units)");
    cmd_gen->add_option("--lot-hi", gen.spec.lot_range.hi, "lot high");
    auto* gen_seed = cmd_gen->add_option("--seed", gen.spec.seed, "generator seed");
    cmd_gen->add_option("--out,-o", gen.out, "output instance file")->required();

    // --- validate ---
    std::string validate_path;
    auto* cmd_validate = app.add_subcommand("validate", "check an instance file");
    cmd_validate->add_option("instance", validate_path, "instance JSON file")->required();

    // --- train ---
    TrainOptions tr;
    auto* cmd_train = app.add_subcommand("train", "run the online A2C loop");
    cmd_train->add_option("--config", tr.config_path, "train config JSON");
    cmd_train->add_option("--episodes", tr.episodes, "episode count (overrides config)");
    auto* train_seed = cmd_train->add_option("--seed", tr.seed, "training seed");
    cmd_train->add_option("--instance", tr.instance_path, "fixed instance file");
    cmd_train->add_option("--resume", tr.resume_path, "checkpoint to continue from");
    cmd_train->add_option("--out,-o", tr.out, "checkpoint output file")->required();
    cmd_train->add_option("--log", tr.log_path, "training log CSV output");

    // --- dispatch ---
    std::string di_ckpt, di_inst, di_out;
    auto* cmd_dispatch = app.add_subcommand("dispatch", "greedy policy dispatch");
    cmd_dispatch->add_option("--checkpoint", di_ckpt, "checkpoint file")->required();
    cmd_dispatch->add_option("--instance", di_inst, "instance file")->required();
    cmd_dispatch->add_option("--out,-o", di_out, "schedule JSON output");

    // --- shield ---
    std::string sh_ckpt, sh_inst, sh_out, sh_trace;
    fl::ShieldConfig sh_config;
    bool sh_seed_set = false;
    auto* cmd_shield = app.add_subcommand("shield", "soft-shielded dispatch");
    cmd_shield->add_option("--checkpoint", sh_ckpt, "checkpoint file")->required();
    cmd_shield->add_option("--instance", sh_inst, "instance file")->required();
    cmd_shield->add_option("--rollouts,-K", sh_config.rollouts, "simulations per decision");
    cmd_shield->add_option("--alpha", sh_config.alpha, "Monte-Carlo weight");
    cmd_shield->add_option("--beta", sh_config.beta, "prior weight");
    cmd_shield->add_option("--threads", sh_config.threads, "rollout worker threads");
    cmd_shield->add_option("--seed", sh_config.seed, "rollout seed")->required();
    cmd_shield->add_option("--out,-o", sh_out, "schedule JSON output");
    cmd_shield->add_option("--trace", sh_trace, "per-decision trace CSV output");

    // --- pdr ---
    std::string pdr_rule, pdr_inst, pdr_out;
    auto* cmd_pdr = app.add_subcommand("pdr", "dispatch with one priority rule");
    cmd_pdr->add_option("--rule", pdr_rule, "SCT|SPT|STCT|SWTCT|LPT|LTCT|EDD|ECT|EST|SRT")
        ->required();
    cmd_pdr->add_option("--instance", pdr_inst, "instance file")->required();
    cmd_pdr->add_option("--out,-o", pdr_out, "schedule JSON output");

    // --- export-lp ---
    std::string lp_inst, lp_out, lp_objective = "weighted";
    fl::MilpExportConfig lp_config;
    auto* cmd_export = app.add_subcommand("export-lp", "write the MILP as CPLEX LP text");
    cmd_export->add_option("--instance", lp_inst, "instance file")->required();
    cmd_export->add_option("--out,-o", lp_out, "LP output file")->required();
    cmd_export->add_option("--objective", lp_objective, "weighted|lex1|lex2");
    cmd_export->add_option("--w1", lp_config.w1, "changeover weight");
    cmd_export->add_option("--w2", lp_config.w2, "tardiness weight");
    cmd_export->add_option("--obj1-bound", lp_config.obj1_bound, "stage-2 changeover bound");
    cmd_export->add_option("--epsilon", lp_config.epsilon, "stage-2 bound slack");
    cmd_export->add_option("--positions", lp_config.positions_per_line,
                           "slots per line R (default: job count)");
    cmd_export->add_option("--big-m", lp_config.big_m, "big-M constant (default: auto)");

    // --- solve-exact ---
    std::string ex_inst, ex_out;
    fl::ExactLimits ex_limits;
    auto* cmd_exact = app.add_subcommand("solve-exact", "exhaustive oracle for tiny instances");
    cmd_exact->add_option("--instance", ex_inst, "instance file")->required();
    cmd_exact->add_option("--out,-o", ex_out, "schedule JSON output");
    cmd_exact->add_option("--max-jobs", ex_limits.max_jobs, "enumeration job limit");
    cmd_exact->add_option("--max-lines", ex_limits.max_lines, "enumeration line limit");

    // --- bench ---
    std::string be_config, be_csv, be_table, be_gantt_dir;
    std::optional<std::uint64_t> be_seed;
    int be_parallel = 0;
    auto* cmd_bench = app.add_subcommand("bench", "run the comparison harness");
    cmd_bench->add_option("--config", be_config, "suite config JSON")->required();
    cmd_bench->add_option("--seed", be_seed, "suite seed (overrides config)");
    cmd_bench->add_option("--out-csv", be_csv, "report CSV output");
    cmd_bench->add_option("--out-table", be_table, "report table output");
    cmd_bench->add_option("--gantt-dir", be_gantt_dir, "directory for per-cell gantt SVGs");
    cmd_bench->add_option("--parallel", be_parallel, "shield rollout worker threads");

    // --- gantt ---
    std::string ga_sched, ga_inst, ga_out;
    auto* cmd_gantt = app.add_subcommand("gantt", "render a schedule as SVG");
    cmd_gantt->add_option("--schedule", ga_sched, "schedule JSON file")->required();
    cmd_gantt->add_option("--instance", ga_inst, "instance file")->required();
    cmd_gantt->add_option("--out,-o", ga_out, "SVG output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*cmd_gen) {
            fl::GeneratorSpec spec = gen.spec;
            if (!gen.spec_path.empty()) {
                spec = fl::parse_generator_spec(fl::read_file(gen.spec_path));
                // flags override spec-file values when given
                if (!gen_seed->empty()) spec.seed = gen.spec.seed;
            } else if (gen_seed->empty()) {
                std::cerr << "gen: --seed is required (or provide --spec)\n";
                return 2;
            }
            fl::GeneratorNotes notes;
            fl::Instance inst = fl::generate(spec, &notes);
            if (notes.flexibility_clamped) {
                std::cerr << "note: flexibility upper bound clamped to " << notes.clamped_hi
                          << " (line count)\n";
            }
            fl::write_file(gen.out, fl::save(inst));
        } else if (*cmd_validate) {
            fl::Instance inst = fl::load_lenient(fl::read_file(validate_path));
            auto violations = fl::validate(inst);
            for (const auto& v : violations) {
                std::cout << v.field << ": " << v.message << "\n";
            }
            return violations.empty() ? 0 : 1;
        } else if (*cmd_train) {
            fl::TrainConfig config;
            if (!tr.config_path.empty()) config = parse_train_config(fl::read_file(tr.config_path));
            if (tr.episodes >= 0) config.episodes = tr.episodes;
            if (tr.seed) config.seed = *tr.seed;
            if (!tr.instance_path.empty()) {
                config.fixed_instance = load_instance_file(tr.instance_path);
                config.generator.reset();
            }
            if (train_seed->empty() && tr.config_path.empty()) {
                std::cerr << "train: --seed is required (or provide --config)\n";
                return 2;
            }
            std::optional<fl::Checkpoint> resume;
            if (!tr.resume_path.empty()) resume = load_checkpoint_file(tr.resume_path);
            fl::TrainResult result = fl::train(config, resume ? &*resume : nullptr);
            fl::write_file(tr.out, fl::save_checkpoint(result.checkpoint));
            if (!tr.log_path.empty()) {
                fl::write_file(tr.log_path, fl::training_log_csv(result.log));
            }
        } else if (*cmd_dispatch) {
            fl::Checkpoint ckpt = load_checkpoint_file(di_ckpt);
            fl::Instance inst = load_instance_file(di_inst);
            auto [schedule, stats] = fl::greedy_dispatch(ckpt, inst);
            if (!di_out.empty()) fl::write_file(di_out, fl::save_schedule(schedule));
            print_schedule_summary(schedule, inst);
        } else if (*cmd_shield) {
            fl::Checkpoint ckpt = load_checkpoint_file(sh_ckpt);
            fl::Instance inst = load_instance_file(sh_inst);
            std::vector<fl::DecisionTrace> traces;
            auto [schedule, stats] = fl::shielded_dispatch(
                inst, ckpt, sh_config, sh_trace.empty() ? nullptr : &traces);
            if (!sh_out.empty()) fl::write_file(sh_out, fl::save_schedule(schedule));
            if (!sh_trace.empty()) fl::write_file(sh_trace, fl::trace_csv(traces));
            print_schedule_summary(schedule, inst);
            (void)sh_seed_set;
        } else if (*cmd_pdr) {
            auto rule = fl::rule_from_name(pdr_rule);
            if (!rule) {
                std::cerr << "pdr: unknown rule \"" << pdr_rule << "\"\n";
                return 2;
            }
            fl::Instance inst = load_instance_file(pdr_inst);
            auto [schedule, state] = fl::dispatch_with_rule(inst, *rule);
            if (!pdr_out.empty()) fl::write_file(pdr_out, fl::save_schedule(schedule));
            print_schedule_summary(schedule, inst);
        } else if (*cmd_export) {
            if (lp_objective == "weighted") {
                lp_config.mode = fl::ObjectiveMode::Weighted;
            } else if (lp_objective == "lex1") {
                lp_config.mode = fl::ObjectiveMode::LexStage1;
            } else if (lp_objective == "lex2") {
                lp_config.mode = fl::ObjectiveMode::LexStage2;
            } else {
                std::cerr << "export-lp: unknown objective \"" << lp_objective << "\"\n";
                return 2;
            }
            fl::Instance inst = load_instance_file(lp_inst);
            fl::write_file(lp_out, fl::export_lp(inst, lp_config));
        } else if (*cmd_exact) {
            fl::Instance inst = load_instance_file(ex_inst);
            fl::ExactSolution sol = fl::exact_solve(inst, ex_limits);
            if (!ex_out.empty()) fl::write_file(ex_out, fl::save_schedule(sol.schedule));
            std::cout << "obj1=" << fl::format_fixed(sol.obj1, 3)
                      << " obj2=" << fl::format_fixed(sol.obj2, 3) << "\n";
        } else if (*cmd_bench) {
            fl::SuiteConfig config = fl::parse_suite_config(fl::read_file(be_config));
            if (be_seed) config.seed = *be_seed;
            if (be_parallel > 0) config.shield.threads = be_parallel;
            auto reports = fl::run_suite(config);
            const std::string csv = fl::render_csv(reports);
            const std::string table = fl::render_table(reports);
            if (!be_csv.empty()) fl::write_file(be_csv, csv);
            if (!be_table.empty()) fl::write_file(be_table, table);
            std::cout << table;
            if (!be_gantt_dir.empty()) {
                for (const auto& entry : config.instances) {
                    const fl::Instance inst = std::holds_alternative<fl::Instance>(entry.source)
                                                  ? std::get<fl::Instance>(entry.source)
                                                  : fl::generate(std::get<fl::GeneratorSpec>(
                                                        entry.source));
                    for (const std::string& method : config.methods) {
                        if (auto rule = fl::rule_from_name(method)) {
                            auto [schedule, state] = fl::dispatch_with_rule(inst, *rule);
                            fl::write_file(be_gantt_dir + "/" + entry.id + "_" + method + ".svg",
                                           fl::gantt_svg(schedule, inst));
                        }
                    }
                }
            }
        } else if (*cmd_gantt) {
            fl::Instance inst = load_instance_file(ga_inst);
            fl::Schedule schedule = fl::load_schedule(fl::read_file(ga_sched));
            fl::write_file(ga_out, fl::gantt_svg(schedule, inst));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
