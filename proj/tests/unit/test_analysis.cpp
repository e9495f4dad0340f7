#include <doctest.h>

#include "cascade/analysis.hpp"
#include "cascade/error.hpp"
#include "cascade/synthgen.hpp"
#include "fixtures.hpp"

using namespace cascade;

TEST_CASE("contribution on a constructed bundle") {
    // M1 confident and right on q1, q2; unsure and wrong on q3, q4 where M2 is right.
    auto bundle = testsupport::binary_bundle({"mini", "base"}, {0, 0, 1, 1},
                                             {{0.95, 0.9, 0.6, 0.55}, {0.2, 0.3, 0.1, 0.2}});
    const std::vector<std::string> order = {"mini", "base"};
    CascadePlan plan(bundle, order, {});
    auto run = run_plan(plan, Mode::Sequential, std::vector<double>{0.8}, {});
    auto report = contribution(run.outcomes, bundle, order);

    REQUIRE(report.models.size() == 2);
    const auto& m1 = report.models[0];
    const auto& m2 = report.models[1];
    CHECK(m1.answered_count == 2);
    CHECK(m1.answered_fraction == 50.0);
    CHECK(m1.accuracy_on_answered == 100.0);
    CHECK(m1.accuracy_on_escalated == 0.0);
    CHECK(m1.escalation_drop == 100.0);
    CHECK(!m1.takeover_gain);
    CHECK(m2.answered_count == 2);
    CHECK(m2.accuracy_on_answered == 100.0);
    CHECK(m2.previous_accuracy_on_answered == 0.0);
    CHECK(m2.takeover_gain == 100.0);
    CHECK(!m2.escalation_drop);
    CHECK(report.overall_accuracy == 100.0);
    CHECK(weighted_accuracy(report) == report.overall_accuracy);
}

TEST_CASE("all-min partition") {
    auto bundle = generate(make_synth_spec(400, 3, {{"mini", 0.6}, {"medium", 0.7}, {"base", 0.8}}, 2.0, 100, 4));
    CascadePlan plan(bundle, all_models(bundle), {});
    const double lo = plan.min_threshold();
    auto run = run_plan(plan, Mode::Sequential, std::vector<double>{lo, lo}, {});
    auto report = contribution(run.outcomes, bundle, all_models(bundle));
    CHECK(report.models[0].answered_fraction == 100.0);
    CHECK(report.models[0].accuracy_on_answered == bundle.standalone_accuracy(0));
    CHECK(!report.models[1].accuracy_on_answered);
    CHECK(!report.models[0].escalation_drop);
}

TEST_CASE("contribution rejects mismatched outcomes") {
    auto bundle = testsupport::binary_bundle({"mini", "base"}, {0, 1}, {{0.9, 0.8}, {0.7, 0.2}});
    const std::vector<std::string> order = {"mini", "base"};
    CascadePlan plan(bundle, order, {});
    auto run = run_plan(plan, Mode::Sequential, std::vector<double>{0.85}, {});
    auto fewer = std::vector<CascadeOutcome>(run.outcomes.begin(), run.outcomes.begin() + 1);
    CHECK_THROWS_AS(contribution(fewer, bundle, order), Error);
    std::swap(run.outcomes[0], run.outcomes[1]);
    CHECK_THROWS_AS(contribution(run.outcomes, bundle, order), Error);
}

TEST_CASE("tuning endpoints") {
    auto bundle = generate(make_synth_spec(600, 2, {{"mini", 0.7}, {"medium", 0.78}, {"base", 0.85}}, 2.0, 100, 8));
    CascadePlan plan(bundle, all_models(bundle), {});
    auto grid = threshold_grid(plan, 8);

    auto cheapest = tune(plan, Mode::Sequential, bundle.standalone_cost(0), grid);
    CHECK(cheapest.thresholds == std::vector<double>{plan.min_threshold(), plan.min_threshold()});
    CHECK(cheapest.validation_accuracy == bundle.standalone_accuracy(0));

    const double everything = 0.31e9 + 2.52e9 + 8.49e9;
    auto unconstrained = tune(plan, Mode::Sequential, everything, grid);
    double best = 0.0;
    for (const auto& p : sweep(plan, Mode::Sequential, grid)) best = std::max(best, p.accuracy);
    CHECK(unconstrained.validation_accuracy == best);

    try {
        tune(plan, Mode::Sequential, 1.0, grid);
        FAIL("expected InfeasibleBudget");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InfeasibleBudget);
    }
}

TEST_CASE("tuning a mid budget picks the best point under it and reports test metrics") {
    auto val = generate(make_synth_spec(800, 2, {{"mini", 0.72}, {"base", 0.86}}, 2.5, 100, 21));
    auto test = generate(make_synth_spec(800, 2, {{"mini", 0.72}, {"base", 0.86}}, 2.5, 100, 22));
    CascadePlan vp(val, all_models(val), {});
    CascadePlan tp(test, all_models(test), {});
    auto grid = threshold_grid(vp, 30);
    const double budget = 0.31e9 + 0.4 * 8.49e9;
    auto tuned = tune(vp, Mode::Sequential, budget, grid, &tp);
    CHECK(tuned.validation_cost <= budget);
    for (const auto& p : sweep(vp, Mode::Sequential, grid)) {
        if (p.mean_cost <= budget) CHECK(p.accuracy <= tuned.validation_accuracy);
    }
    REQUIRE(tuned.test_accuracy);
    auto direct = run_plan(tp, Mode::Sequential, tuned.thresholds, {});
    CHECK(*tuned.test_accuracy == direct.accuracy);
    CHECK(*tuned.test_cost == direct.mean_cost);
}

TEST_CASE("improvement report") {
    CurveSummary summary;
    summary.matched = {{"a", 80.0, 10.0, Match{10.0, 0.0}}, {"b", 90.0, 20.0, Match{10.0, 50.0}},
                       {"c", 95.0, 40.0, std::nullopt}};
    summary.max_accuracy = 94.0;
    summary.max_accuracy_gain = -1.0;
    auto r = improvement_report(summary);
    CHECK(r.rows[0].improvement_percent == 0.0);
    CHECK(r.rows[1].improvement_percent == 50.0);
    CHECK(r.rows[1].cost_fraction_percent == 50.0);
    CHECK(!r.rows[2].matched_cost);
    CHECK(r.largest_model == "c");
}
