#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "flexline/bench.hpp"
#include "support/testutil.hpp"

using namespace flexline;

namespace {

Schedule tiny1_optimal() {
    EnvState s = reset(tiny1());
    apply_step(s, make_candidate(s, 1, 1));
    apply_step(s, make_candidate(s, 0, 0));
    apply_step(s, make_candidate(s, 2, 0));
    return s.schedule();
}

int count_occurrences(const std::string& text, const std::string& needle) {
    int n = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size())) {
        ++n;
    }
    return n;
}

SuiteConfig pdr_suite() {
    SuiteConfig config;
    config.instances.push_back({"tiny1", tiny1()});
    config.methods.assign(rule_names().begin(), rule_names().end());
    config.runs = 2;
    config.seed = 5;
    config.timing = false;
    config.l_max = 2;
    return config;
}

}  // namespace

TEST_CASE("dcl and dtl follow the daily-load formulas") {
    Schedule opt = tiny1_optimal();
    CHECK(dcl(opt, tiny1()) == doctest::Approx(1.0));
    CHECK(dtl(opt, tiny1()) == doctest::Approx(0.0));
    CHECK(dcl({}, tiny1()) == 0.0);
    CHECK(dtl({}, tiny1()) == 0.0);

    Schedule one{{0, 0, 1, 1.0, 2.0, 3.0, 5.0, 2.0 / 3.0}};
    CHECK(dtl(one, tiny1()) == doctest::Approx(2.0 / 3.0 / 4.0).epsilon(1e-9));  // 0.16667

    // linearity in the changeovers; dtl untouched by them
    Schedule doubled = opt;
    for (ScheduledTask& t : doubled) t.changeover_hours *= 2.0;
    CHECK(dcl(doubled, tiny1()) == doctest::Approx(2.0 * dcl(opt, tiny1())));
    CHECK(dtl(doubled, tiny1()) == dtl(opt, tiny1()));
}

TEST_CASE("suite over the ten rules yields ten feasible reports") {
    auto reports = run_suite(pdr_suite());
    REQUIRE(reports.size() == 10);
    for (const MetricReport& r : reports) {
        CHECK(r.instance_id == "tiny1");
        CHECK(r.line_count == 2);
        CHECK(r.plan_days == 2);
        CHECK(r.job_count == 3);
        // the n*d scaling identity, exact to 1e-9
        CHECK(std::abs(r.dcl * r.line_count * r.plan_days - r.total_changeover) < 1e-9);
        CHECK(std::abs(r.dtl * r.line_count * r.plan_days - r.total_tardiness) < 1e-9);
        CHECK(r.wall_time_seconds == 0.0);  // timing disabled
    }
}

TEST_CASE("suite output is deterministic with timing off") {
    auto a = run_suite(pdr_suite());
    auto b = run_suite(pdr_suite());
    CHECK(render_csv(a) == render_csv(b));
    CHECK(render_table(a) == render_table(b));
}

TEST_CASE("suite rejects unknown methods and missing checkpoints") {
    SuiteConfig bad = pdr_suite();
    bad.methods = {"nonsense"};
    CHECK_THROWS_AS(run_suite(bad), std::invalid_argument);
    SuiteConfig learned = pdr_suite();
    learned.methods = {"a2c"};
    CHECK_THROWS_AS(run_suite(learned), std::invalid_argument);
}

TEST_CASE("train-fresh suites run the learned methods") {
    SuiteConfig config = pdr_suite();
    config.methods = {"sct", "a2c"};
    config.train_fresh = SuiteTrainFresh{15};
    auto reports = run_suite(config);
    REQUIRE(reports.size() == 2);
    CHECK(reports[1].method == "a2c");
    CHECK(reports[1].dcl > 0.0);
}

TEST_CASE("render_table formats three decimals and aligns") {
    std::vector<MetricReport> reports;
    CHECK(render_table(reports) == "instance  method  DCL  DTL  time\n");
    CHECK(render_csv(reports) == "instance,method,dcl,dtl,time\n");
    MetricReport r;
    r.instance_id = "tiny1";
    r.method = "sct";
    r.dcl = 1.0 / 3.0;
    r.dtl = 0.125;
    r.wall_time_seconds = 0.0123456;
    reports.push_back(r);
    std::string csv = render_csv(reports);
    CHECK(csv.find("tiny1,sct,0.333,0.125,0.012") != std::string::npos);
    std::string table = render_table(reports);
    CHECK(table.find("0.333") != std::string::npos);
    // csv parses back into 5 fields per row
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        int commas = 0;
        for (char c : line) commas += c == ',' ? 1 : 0;
        CHECK(commas == 4);
    }
}

TEST_CASE("gantt svg draws the documented shapes") {
    std::string svg = gantt_svg(tiny1_optimal(), tiny1());
    CHECK(count_occurrences(svg, "class=\"task") == 3);
    CHECK(count_occurrences(svg, "class=\"changeover\"") == 3);
    CHECK(count_occurrences(svg, "class=\"band\"") == 2);
    CHECK(count_occurrences(svg, "class=\"grid\"") == 3);  // day lines at 0, 24, 48
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    // deterministic
    CHECK(gantt_svg(tiny1_optimal(), tiny1()) == svg);
}

TEST_CASE("gantt svg of an empty schedule has axes and gridlines only") {
    std::string svg = gantt_svg({}, tiny1());
    CHECK(count_occurrences(svg, "class=\"task") == 0);
    CHECK(count_occurrences(svg, "class=\"changeover\"") == 0);
    CHECK(count_occurrences(svg, "class=\"band\"") == 0);
    CHECK(count_occurrences(svg, "class=\"grid\"") == 3);
    CHECK(count_occurrences(svg, "class=\"axis\"") == 2);
}

TEST_CASE("tardy tasks get a distinct outline") {
    EnvState s = reset(tiny1());
    apply_step(s, make_candidate(s, 0, 0));
    apply_step(s, make_candidate(s, 1, 0));  // tardy
    apply_step(s, make_candidate(s, 2, 1));
    std::string svg = gantt_svg(s.schedule(), tiny1());
    CHECK(count_occurrences(svg, "class=\"task tardy\"") == 1);
}

TEST_CASE("suite config json parses") {
    std::string text = R"({
        "instances": [
            {"id": "gen1", "generate": {"jobs": 4, "lines": 2, "days": 2, "seed": 3}}
        ],
        "methods": ["sct", "spt"],
        "runs": 2,
        "seed": 11,
        "selection_key": "dcl_dtl",
        "timing": false,
        "l_max": 4
    })";
    SuiteConfig config = parse_suite_config(text);
    CHECK(config.instances.size() == 1);
    CHECK(config.methods.size() == 2);
    CHECK(config.runs == 2);
    CHECK(config.selection_key == SelectionKey::DclDtl);
    CHECK_FALSE(config.timing);
    auto reports = run_suite(config);
    CHECK(reports.size() == 2);
}

TEST_CASE("uppercase pdr names are accepted as methods") {
    SuiteConfig config = pdr_suite();
    config.methods = {"SCT", "Ect"};
    auto reports = run_suite(config);
    CHECK(reports.size() == 2);
}
