#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "flexline/instance.hpp"
#include "support/testutil.hpp"

using namespace flexline;

TEST_CASE("tiny1 fixture satisfies every invariant") {
    CHECK(validate(tiny1()).empty());
}

TEST_CASE("tiny1 carries the documented numbers") {
    Instance t = tiny1();
    CHECK(t.job_count() == 3);
    CHECK(t.line_count() == 2);
    CHECK(t.horizon_days == 2);
    CHECK(t.processing_hours(0, 0) == doctest::Approx(4.0));
    CHECK(t.processing_hours(0, 1) == doctest::Approx(5.0));
    CHECK(t.processing_hours(1, 0) == doctest::Approx(200.0 / 12.0));
    CHECK(t.processing_hours(1, 1) == doctest::Approx(20.0));
    CHECK(t.processing_hours(2, 0) == doctest::Approx(5.0));
    CHECK(t.processing_hours(2, 1) == doctest::Approx(3.0));
    CHECK(t.initial_changeover(1, 0) == 1.0);
    CHECK(t.changeover_between(0, 1, 0) == 2.0);
}

TEST_CASE("validate flags a job with no eligible line") {
    Instance t = tiny1();
    t.eligible[1] = {false, false};
    auto violations = validate(t);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].field == "eligible");
    CHECK(violations[0].i == 1);
    CHECK(violations[0].message.find("no eligible line") != std::string::npos);
}

TEST_CASE("validate flags a demand day beyond the horizon") {
    Instance t = tiny1();
    t.jobs[2].demand_day = 5;
    auto violations = validate(t);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].field == "demand_day");
    CHECK(violations[0].i == 2);
}

TEST_CASE("validate flags non-positive lots and negative values") {
    Instance t = tiny1();
    t.jobs[0].demand_lot = 0.0;
    t.lines[1].setup_hours = -1.0;
    t.changeover[1][2][0] = -0.5;
    auto violations = validate(t);
    CHECK(violations.size() == 3);
}

TEST_CASE("generate honors the requested sizes") {
    GeneratorSpec spec;
    spec.num_jobs = 61;
    spec.num_lines = 4;
    spec.horizon_days = 7;
    spec.flexibility_lo = 1;
    spec.flexibility_hi = 10;  // clamps to 4
    spec.seed = 7;
    GeneratorNotes notes;
    Instance inst = generate(spec, &notes);
    CHECK(inst.job_count() == 61);
    CHECK(inst.line_count() == 4);
    CHECK(inst.horizon_days == 7);
    CHECK(notes.flexibility_clamped);
    CHECK(notes.clamped_hi == 4);
    CHECK(validate(inst).empty());
}

TEST_CASE("generate is a pure function of the spec") {
    GeneratorSpec spec;
    spec.num_jobs = 12;
    spec.num_lines = 3;
    spec.horizon_days = 4;
    spec.flexibility_hi = 3;
    spec.seed = 99;
    Instance a = generate(spec);
    Instance b = generate(spec);
    CHECK(a == b);
    CHECK(save(a) == save(b));
}

TEST_CASE("full flexibility makes every row entirely eligible") {
    GeneratorSpec spec;
    spec.num_jobs = 3;
    spec.num_lines = 2;
    spec.horizon_days = 2;
    spec.flexibility_lo = 2;
    spec.flexibility_hi = 2;
    spec.seed = 1;
    Instance inst = generate(spec);
    for (const auto& row : inst.eligible) {
        for (bool e : row) CHECK(e);
    }
}

TEST_CASE("generate rejects flexibility beyond the line count") {
    GeneratorSpec spec;
    spec.num_jobs = 2;
    spec.num_lines = 2;
    spec.horizon_days = 1;
    spec.flexibility_lo = 3;
    spec.flexibility_hi = 3;
    CHECK_THROWS_AS(generate(spec), std::invalid_argument);
}

TEST_CASE("validate(generate(spec)) is empty over many random specs") {
    for (int k = 0; k < 1000; ++k) {
        Instance inst = testutil::random_instance(k);
        CAPTURE(k);
        CHECK(validate(inst).empty());
    }
}

TEST_CASE("save/load round-trips exactly") {
    Instance t = tiny1();
    CHECK(load(save(t)) == t);
    for (int k = 0; k < 50; ++k) {
        Instance inst = testutil::random_instance(1000 + k);
        Instance back = load(save(inst));
        CHECK(back == inst);
        CHECK(save(back) == save(inst));
    }
}

TEST_CASE("load rejects a negative rate and names the field") {
    std::string text = save(tiny1());
    auto pos = text.find("10.0");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 4, "-1.0");
    try {
        load(text);
        FAIL("expected a schema error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("rate") != std::string::npos);
    }
}

TEST_CASE("load rejects a missing changeover tensor") {
    Instance t = tiny1();
    std::string text = save(t);
    auto pos = text.find("\"changeover\"");
    REQUIRE(pos != std::string::npos);
    // drop the changeover key: cut from the preceding comma to the final brace
    auto comma = text.rfind(',', pos);
    auto end = text.rfind('}');
    text = text.substr(0, comma) + "\n" + text.substr(end);
    try {
        load(text);
        FAIL("expected a schema error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("changeover") != std::string::npos);
    }
}

TEST_CASE("load rejects extra keys") {
    std::string text = save(tiny1());
    text.insert(text.find("\"jobs\""), "\"extra\": 1, ");
    CHECK_THROWS_AS(load(text), std::runtime_error);
}

TEST_CASE("eligible line counts stay inside the flexibility range") {
    GeneratorSpec spec;
    spec.num_jobs = 40;
    spec.num_lines = 5;
    spec.horizon_days = 6;
    spec.flexibility_lo = 2;
    spec.flexibility_hi = 4;
    spec.seed = 5;
    Instance inst = generate(spec);
    for (const auto& row : inst.eligible) {
        int count = 0;
        for (bool e : row) count += e ? 1 : 0;
        CHECK(count >= 2);
        CHECK(count <= 4);
    }
}

TEST_CASE("generator spec json parses with defaults") {
    GeneratorSpec spec = parse_generator_spec(
        R"({"jobs": 5, "lines": 2, "days": 3, "seed": 11})");
    CHECK(spec.num_jobs == 5);
    CHECK(spec.flexibility_hi == 2);
    CHECK(spec.rate_range.lo == 5.0);
    GeneratorSpec custom = parse_generator_spec(
        R"({"jobs": 5, "lines": 2, "days": 3, "seed": 11,
            "flexibility": [1, 2], "rate": [8, 20], "lot": [20, 160]})");
    CHECK(custom.rate_range.lo == 8.0);
    CHECK(custom.lot_range.hi == 160.0);
}
