#include "flexline/bench.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "flexline/rng.hpp"
#include "flexline/textio.hpp"
#include "json.hpp"

namespace flexline {

double dcl(const Schedule& schedule, const Instance& inst) {
    return totals(schedule).first / (inst.line_count() * static_cast<double>(inst.horizon_days));
}

double dtl(const Schedule& schedule, const Instance& inst) {
    return totals(schedule).second / (inst.line_count() * static_cast<double>(inst.horizon_days));
}

namespace {

struct RunOutcome {
    Schedule schedule;
    double seconds = 0.0;
};

RunOutcome run_method(const Instance& inst, const std::string& method,
                      const SuiteConfig& config, const Checkpoint* ckpt, std::uint64_t run_seed) {
    RunOutcome out;
    const auto t0 = std::chrono::steady_clock::now();
    if (method == "a2c") {
        if (!ckpt) throw std::invalid_argument("suite: method a2c needs a checkpoint");
        out.schedule = greedy_dispatch(*ckpt, inst).first;
    } else if (method == "a2c+shield") {
        if (!ckpt) throw std::invalid_argument("suite: method a2c+shield needs a checkpoint");
        ShieldConfig shield = config.shield;
        shield.seed = run_seed;
        out.schedule = shielded_dispatch(inst, *ckpt, shield).first;
    } else if (auto rule = rule_from_name(method)) {
        out.schedule =
            dispatch_with_rule(inst, *rule, config.rules, config.overdue_penalty).first;
    } else {
        throw std::invalid_argument("suite: unknown method \"" + method + "\"");
    }
    const auto t1 = std::chrono::steady_clock::now();
    out.seconds = std::chrono::duration<double>(t1 - t0).count();
    return out;
}

bool better(const std::pair<double, double>& a, const std::pair<double, double>& b,
            SelectionKey key) {
    if (key == SelectionKey::DtlDcl) {
        return std::make_pair(a.second, a.first) < std::make_pair(b.second, b.first);
    }
    return a < b;
}

}  // namespace

std::vector<MetricReport> run_suite(const SuiteConfig& config) {
    if (config.runs < 1) throw std::invalid_argument("suite: runs must be >= 1");
    std::vector<MetricReport> reports;

    for (std::size_t ii = 0; ii < config.instances.size(); ++ii) {
        const SuiteInstance& entry = config.instances[ii];
        const Instance inst = std::holds_alternative<Instance>(entry.source)
                                  ? std::get<Instance>(entry.source)
                                  : generate(std::get<GeneratorSpec>(entry.source));

        bool needs_learned = false;
        for (const std::string& m : config.methods) {
            if (m == "a2c" || m == "a2c+shield") needs_learned = true;
        }
        std::optional<Checkpoint> local_ckpt;
        if (needs_learned) {
            if (config.train_fresh) {
                TrainConfig tc;
                tc.episodes = config.train_fresh->episodes;
                tc.seed = mix_seed(config.seed, 0x7121, static_cast<std::uint64_t>(ii));
                tc.fixed_instance = inst;
                tc.l_max = config.l_max;
                tc.rules = config.rules;
                tc.overdue_penalty = config.overdue_penalty;
                local_ckpt = train(tc).checkpoint;
            } else if (config.checkpoint) {
                local_ckpt = config.checkpoint;
            } else {
                throw std::invalid_argument(
                    "suite: learned methods need a checkpoint or train_fresh");
            }
        }

        for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
            const std::string& method = config.methods[mi];
            bool have = false;
            RunOutcome best;
            std::pair<double, double> best_key{0.0, 0.0};
            for (int run = 0; run < config.runs; ++run) {
                const std::uint64_t run_seed =
                    mix_seed(config.seed, mix_seed(static_cast<std::uint64_t>(ii),
                                                   static_cast<std::uint64_t>(mi)),
                             static_cast<std::uint64_t>(run));
                RunOutcome out = run_method(inst, method, config,
                                            local_ckpt ? &*local_ckpt : nullptr, run_seed);
                Report feasibility = check_constraints(inst, out.schedule);
                if (!feasibility.ok()) {
                    throw std::runtime_error("suite: infeasible schedule from method \"" + method +
                                             "\" on instance \"" + entry.id + "\": " +
                                             feasibility.violations.front().message);
                }
                const auto key = totals(out.schedule);  // (changeover, tardiness)
                if (!have || better(key, best_key, config.selection_key)) {
                    best = std::move(out);
                    best_key = key;
                    have = true;
                }
            }
            MetricReport report;
            report.instance_id = entry.id;
            report.method = method;
            report.total_changeover = best_key.first;
            report.total_tardiness = best_key.second;
            report.dcl = dcl(best.schedule, inst);
            report.dtl = dtl(best.schedule, inst);
            report.wall_time_seconds = config.timing ? best.seconds : 0.0;
            report.line_count = inst.line_count();
            report.plan_days = inst.horizon_days;
            report.job_count = inst.job_count();
            reports.push_back(std::move(report));
        }
    }
    return reports;
}

std::string render_csv(const std::vector<MetricReport>& reports) {
    std::string out = "instance,method,dcl,dtl,time\n";
    for (const MetricReport& r : reports) {
        out += r.instance_id + "," + r.method + "," + format_fixed(r.dcl, 3) + "," +
               format_fixed(r.dtl, 3) + "," + format_fixed(r.wall_time_seconds, 3) + "\n";
    }
    return out;
}

std::string render_table(const std::vector<MetricReport>& reports) {
    std::vector<std::array<std::string, 5>> rows;
    rows.push_back({"instance", "method", "DCL", "DTL", "time"});
    for (const MetricReport& r : reports) {
        rows.push_back({r.instance_id, r.method, format_fixed(r.dcl, 3), format_fixed(r.dtl, 3),
                        format_fixed(r.wall_time_seconds, 3)});
    }
    std::array<std::size_t, 5> width{};
    for (const auto& row : rows) {
        for (int c = 0; c < 5; ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::string out;
    for (const auto& row : rows) {
        for (int c = 0; c < 5; ++c) {
            out += row[c];
            if (c < 4) out += std::string(width[c] - row[c].size() + 2, ' ');
        }
        out += '\n';
    }
    return out;
}

namespace {

std::string fmt_px(double v) { return format_fixed(v, 2); }

}  // namespace

std::string gantt_svg(const Schedule& schedule, const Instance& inst) {
    const double horizon = inst.horizon_hours();
    const double px_per_hour = std::max(6.0, 960.0 / std::max(horizon, 1.0));
    const double left = 70.0, top = 40.0, band_h = 32.0, band_gap = 12.0;
    const int J = inst.line_count();
    const double width = left + horizon * px_per_hour + 30.0;
    const double height = top + J * (band_h + band_gap) + 40.0;

    auto x_of = [&](double hours) { return left + hours * px_per_hour; };
    auto y_of = [&](int line) { return top + line * (band_h + band_gap); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_px(width) + "\" height=\"" +
           fmt_px(height) + "\" viewBox=\"0 0 " + fmt_px(width) + " " + fmt_px(height) + "\">\n";
    svg += "<defs><pattern id=\"hatch\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" "
           "patternTransform=\"rotate(45)\"><rect width=\"6\" height=\"6\" fill=\"#e8e8e8\"/>"
           "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#888888\" stroke-width=\"2\"/>"
           "</pattern></defs>\n";

    // axes
    svg += "<line class=\"axis\" x1=\"" + fmt_px(left) + "\" y1=\"" + fmt_px(top - 10.0) +
           "\" x2=\"" + fmt_px(left) + "\" y2=\"" + fmt_px(height - 30.0) +
           "\" stroke=\"#333333\"/>\n";
    svg += "<line class=\"axis\" x1=\"" + fmt_px(left) + "\" y1=\"" + fmt_px(height - 30.0) +
           "\" x2=\"" + fmt_px(width - 20.0) + "\" y2=\"" + fmt_px(height - 30.0) +
           "\" stroke=\"#333333\"/>\n";
    // day gridlines every 24 h
    for (int d = 0; d <= inst.horizon_days; ++d) {
        const double x = x_of(24.0 * d);
        svg += "<line class=\"grid\" x1=\"" + fmt_px(x) + "\" y1=\"" + fmt_px(top - 10.0) +
               "\" x2=\"" + fmt_px(x) + "\" y2=\"" + fmt_px(height - 30.0) +
               "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 3\"/>\n";
        svg += "<text x=\"" + fmt_px(x) + "\" y=\"" + fmt_px(height - 14.0) +
               "\" font-size=\"11\" text-anchor=\"middle\">" + std::to_string(24 * d) +
               "h</text>\n";
    }

    std::vector<bool> occupied(J, false);
    for (const ScheduledTask& t : schedule) occupied[t.line] = true;
    for (int j = 0; j < J; ++j) {
        if (!occupied[j]) continue;
        svg += "<rect class=\"band\" x=\"" + fmt_px(left) + "\" y=\"" + fmt_px(y_of(j)) +
               "\" width=\"" + fmt_px(horizon * px_per_hour) + "\" height=\"" + fmt_px(band_h) +
               "\" fill=\"#f7f7f7\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + fmt_px(left - 8.0) + "\" y=\"" + fmt_px(y_of(j) + band_h * 0.65) +
               "\" font-size=\"12\" text-anchor=\"end\">L" + std::to_string(j + 1) + "</text>\n";
    }

    Schedule sorted = schedule;
    std::sort(sorted.begin(), sorted.end(), [](const ScheduledTask& a, const ScheduledTask& b) {
        return std::tie(a.line, a.position) < std::tie(b.line, b.position);
    });
    for (const ScheduledTask& t : sorted) {
        const double y = y_of(t.line);
        svg += "<rect class=\"changeover\" x=\"" + fmt_px(x_of(t.start_hours - t.changeover_hours)) +
               "\" y=\"" + fmt_px(y + 4.0) + "\" width=\"" +
               fmt_px(t.changeover_hours * px_per_hour) + "\" height=\"" + fmt_px(band_h - 8.0) +
               "\" fill=\"url(#hatch)\" stroke=\"#999999\"/>\n";
        const bool tardy = t.tardiness_hours > 0.0;
        svg += std::string("<rect class=\"task") + (tardy ? " tardy" : "") + "\" x=\"" +
               fmt_px(x_of(t.start_hours)) + "\" y=\"" + fmt_px(y + 2.0) + "\" width=\"" +
               fmt_px((t.completion_hours - t.start_hours) * px_per_hour) + "\" height=\"" +
               fmt_px(band_h - 4.0) + "\" fill=\"#7fb3d5\"" +
               (tardy ? " stroke=\"#c0392b\" stroke-width=\"2.5\" stroke-dasharray=\"5 2\""
                      : " stroke=\"#34495e\"") +
               "/>\n";
        svg += "<text x=\"" + fmt_px(x_of(t.start_hours) + 3.0) + "\" y=\"" +
               fmt_px(y + band_h * 0.65) + "\" font-size=\"11\">J" + std::to_string(t.job + 1) +
               "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

SuiteConfig parse_suite_config(const std::string& json_text) {
    using ordered_json = nlohmann::ordered_json;
    ordered_json root;
    try {
        root = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("suite config: ") + e.what());
    }
    SuiteConfig config;
    if (!root.is_object()) throw std::runtime_error("suite config: expected an object");
    for (const auto& entry : root.at("instances")) {
        SuiteInstance si;
        si.id = entry.at("id").get<std::string>();
        if (entry.contains("file")) {
            si.source = load(read_file(entry.at("file").get<std::string>()));
        } else if (entry.contains("generate")) {
            si.source = parse_generator_spec(entry.at("generate").dump());
        } else {
            throw std::runtime_error("suite config: instance needs \"file\" or \"generate\"");
        }
        config.instances.push_back(std::move(si));
    }
    for (const auto& m : root.at("methods")) {
        config.methods.push_back(m.get<std::string>());
    }
    if (root.contains("runs")) config.runs = root.at("runs").get<int>();
    if (root.contains("seed")) config.seed = root.at("seed").get<std::uint64_t>();
    if (root.contains("selection_key")) {
        const std::string key = root.at("selection_key").get<std::string>();
        if (key == "dtl_dcl") {
            config.selection_key = SelectionKey::DtlDcl;
        } else if (key == "dcl_dtl") {
            config.selection_key = SelectionKey::DclDtl;
        } else {
            throw std::runtime_error("suite config: selection_key must be dtl_dcl or dcl_dtl");
        }
    }
    if (root.contains("penalty")) config.overdue_penalty = root.at("penalty").get<double>();
    if (root.contains("l_max")) config.l_max = root.at("l_max").get<int>();
    if (root.contains("swtct_weight")) {
        config.rules.swtct_weight = root.at("swtct_weight").get<double>();
    }
    if (root.contains("checkpoint")) {
        config.checkpoint = load_checkpoint(read_file(root.at("checkpoint").get<std::string>()));
    }
    if (root.contains("train")) {
        SuiteTrainFresh tf;
        if (root.at("train").contains("episodes")) {
            tf.episodes = root.at("train").at("episodes").get<int>();
        }
        config.train_fresh = tf;
    }
    if (root.contains("shield")) {
        const auto& s = root.at("shield");
        if (s.contains("rollouts")) config.shield.rollouts = s.at("rollouts").get<int>();
        if (s.contains("alpha")) config.shield.alpha = s.at("alpha").get<double>();
        if (s.contains("beta")) config.shield.beta = s.at("beta").get<double>();
        if (s.contains("threads")) config.shield.threads = s.at("threads").get<int>();
    }
    if (root.contains("timing")) config.timing = root.at("timing").get<bool>();
    return config;
}

}  // namespace flexline
