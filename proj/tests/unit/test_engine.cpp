#include <doctest.h>

#include "cascade/engine.hpp"
#include "cascade/error.hpp"
#include "fixtures.hpp"

using namespace cascade;
using testsupport::binary_bundle;

namespace {

CascadeConfig config(std::vector<std::string> models, std::vector<double> t, Mode mode = Mode::Sequential,
                     std::vector<double> s = {}) {
    CascadeConfig c;
    c.model_order = std::move(models);
    c.thresholds = std::move(t);
    c.mode = mode;
    c.skip_thresholds = std::move(s);
    return c;
}

}  // namespace

TEST_CASE("sequential walk-through") {
    // MaxProb at M1: 0.9, 0.6, 0.95
    auto bundle = binary_bundle({"mini", "base"}, {0, 1, 0}, {{0.9, 0.6, 0.95}, {0.8, 0.3, 0.4}});
    auto run = run_cascade(bundle, config({"mini", "base"}, {0.8}));
    REQUIRE(run.outcomes.size() == 3);
    CHECK(run.outcomes[0].answered_by == "mini");
    CHECK(run.outcomes[1].answered_by == "base");
    CHECK(run.outcomes[2].answered_by == "mini");
    CHECK(run.outcomes[1].used == std::vector<std::string>{"mini", "base"});
    CHECK(run.outcomes[1].cost == 0.31e9 + 8.49e9);
    CHECK(run.outcomes[0].cost == 0.31e9);
    // base predicts label 1 on q2 (p0 = 0.3)
    CHECK(run.outcomes[1].correct);
    CHECK(run.accuracy == 100.0);
}

TEST_CASE("threshold equal to confidence answers") {
    auto bundle = binary_bundle({"mini", "base"}, {0}, {{0.8}, {0.9}});
    auto run = run_cascade(bundle, config({"mini", "base"}, {0.8}));
    CHECK(run.outcomes[0].answered_by == "mini");
}

TEST_CASE("degenerate thresholds") {
    auto bundle = binary_bundle({"mini", "medium", "base"}, {0, 1, 0, 1},
                                {{0.9, 0.6, 0.5, 1.0}, {0.7, 0.2, 0.4, 0.5}, {0.8, 0.3, 0.6, 0.1}});
    CascadePlan plan(bundle, all_models(bundle), {});
    const double lo = plan.min_threshold();
    const double hi = plan.max_threshold();

    auto all_min = run_plan(plan, Mode::Sequential, std::vector<double>{lo, lo}, {});
    CHECK(all_min.accuracy == bundle.standalone_accuracy(0));
    CHECK(all_min.mean_cost == bundle.standalone_cost(0));
    for (const auto& o : all_min.outcomes) CHECK(o.used.size() == 1);

    auto all_max = run_plan(plan, Mode::Sequential, std::vector<double>{hi, hi}, {});
    CHECK(all_max.accuracy == bundle.standalone_accuracy(2));
    CHECK(all_max.mean_cost == 0.31e9 + 2.52e9 + 8.49e9);
    for (const auto& o : all_max.outcomes) {
        CHECK(o.used == std::vector<std::string>{"mini", "medium", "base"});
        CHECK(o.answered_by == "base");
    }
}

TEST_CASE("routing skips the middle model") {
    // M1 MaxProb 0.40 is below 1/2 so use three labels
    std::vector<InstanceRecord> inst = {{"a", 0, 100}, {"b", 0, 100}};
    std::vector<ModelProfile> profiles = {*builtin_profile("mini"), *builtin_profile("medium"),
                                          *builtin_profile("base")};
    std::vector<std::vector<PredictionRecord>> preds(3);
    preds[0] = {{"a", "mini", {0.40, 0.35, 0.25}, 0}, {"b", "mini", {0.95, 0.03, 0.02}, 0}};
    preds[1] = {{"a", "medium", {0.2, 0.7, 0.1}, 0}, {"b", "medium", {0.5, 0.3, 0.2}, 0}};
    preds[2] = {{"a", "base", {0.6, 0.3, 0.1}, 0}, {"b", "base", {0.6, 0.3, 0.1}, 0}};
    EvaluationBundle bundle(inst, profiles, preds, 100, false);

    auto run = run_cascade(bundle, config({"mini", "medium", "base"}, {0.9, 0.9}, Mode::Routing, {0.5, 0.5}));
    CHECK(run.outcomes[0].used == std::vector<std::string>{"mini", "base"});
    CHECK(run.outcomes[0].cost == 0.31e9 + 8.49e9);
    CHECK(run.outcomes[1].used == std::vector<std::string>{"mini"});

    // collapsed bands reproduce the sequential cascade
    CascadePlan plan(bundle, all_models(bundle), {});
    const double lo = plan.min_threshold();
    auto routed = run_plan(plan, Mode::Routing, std::vector<double>{0.9, 0.6}, std::vector<double>{lo, lo});
    auto seq = run_plan(plan, Mode::Sequential, std::vector<double>{0.9, 0.6}, {});
    for (std::size_t i = 0; i < seq.outcomes.size(); ++i) CHECK(routed.outcomes[i].used == seq.outcomes[i].used);
}

TEST_CASE("escalated medium-to-base instance at length 120") {
    auto bundle = binary_bundle({"medium", "base"}, {0}, {{0.55}, {0.9}}, 120);
    auto run = run_cascade(bundle, config({"medium", "base"}, {0.8}));
    CHECK(run.outcomes[0].used.size() == 2);
    CHECK(run.outcomes[0].cost == 13.21e9);
    CHECK(run.mean_cost == 13.21e9);
}

TEST_CASE("aggregate") {
    auto bundle = binary_bundle({"mini", "base"}, {0, 0, 0, 0}, {{0.9, 0.9, 0.9, 0.1}, {0.9, 0.9, 0.9, 0.9}});
    auto run = run_cascade(bundle, config({"mini", "base"}, {0.5}));
    CHECK(run.accuracy == 75.0);
    CHECK(run.mean_cost == 0.31e9);
    CHECK_THROWS_AS(aggregate({}, bundle), Error);
}

TEST_CASE("configuration errors") {
    auto bundle = binary_bundle({"mini", "medium", "base"}, {0}, {{0.9}, {0.9}, {0.9}});
    auto code = [&](const CascadeConfig& c) {
        try {
            run_cascade(bundle, c);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvariantViolation;
    };
    CHECK(code(config({"mini", "base"}, {1.5})) == ErrorCode::ThresholdOutOfRange);
    CHECK(code(config({"mini", "base"}, {0.2})) == ErrorCode::ThresholdOutOfRange);
    CHECK(code(config({"mini", "base"}, {0.7, 0.8})) == ErrorCode::InvalidConfig);
    CHECK(code(config({"mini", "base"}, {0.7}, Mode::Routing, {0.6})) == ErrorCode::RoutingRequiresK3);
    CHECK(code(config({"mini", "medium", "base"}, {0.7, 0.8}, Mode::Routing, {0.75, 0.6})) ==
          ErrorCode::BandViolation);
    CHECK(code(config({"mini", "large"}, {0.7})) == ErrorCode::UnknownModel);
    CHECK(code(config({"base", "mini"}, {0.7})) == ErrorCode::InvalidConfig);
    CHECK(code(config({"mini", "base"}, {0.7}, Mode::Sequential, {0.6})) == ErrorCode::InvalidConfig);
}

TEST_CASE("sub-cascades use only the listed models") {
    auto bundle = binary_bundle({"mini", "medium", "base"}, {0, 1}, {{0.9, 0.1}, {0.7, 0.4}, {0.2, 0.3}});
    auto run = run_cascade(bundle, config({"medium", "base"}, {0.65}));
    CHECK(run.outcomes[0].used == std::vector<std::string>{"medium"});
    CHECK(run.outcomes[1].used == std::vector<std::string>{"medium", "base"});
    CHECK(run.outcomes[1].cost == 2.52e9 + 8.49e9);
}
