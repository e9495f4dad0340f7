#include <doctest.h>

#include <algorithm>

#include "cascade/error.hpp"
#include "cascade/sweep.hpp"
#include "cascade/synthgen.hpp"
#include "fixtures.hpp"

using namespace cascade;

namespace {

std::vector<CurvePoint> pts(std::initializer_list<std::pair<double, double>> xs) {
    std::vector<CurvePoint> out;
    for (auto [c, a] : xs) out.push_back({c, a, {}, {}});
    return out;
}

std::vector<std::pair<double, double>> pairs(const std::vector<CurvePoint>& ps) {
    std::vector<std::pair<double, double>> out;
    for (const auto& p : ps) out.emplace_back(p.mean_cost, p.accuracy);
    return out;
}

using P = std::vector<std::pair<double, double>>;

}  // namespace

TEST_CASE("interior quantiles") {
    auto q = interior_quantiles({0.8, 0.2, 0.6, 0.4}, 3);
    CHECK(std::find(q.begin(), q.end(), 0.4) != q.end());
    CHECK(std::find(q.begin(), q.end(), 0.6) != q.end());
    CHECK(interior_quantiles({}, 3).empty());
    CHECK(interior_quantiles({1.0, 2.0}, 0).empty());
}

TEST_CASE("threshold grid") {
    auto bundle = testsupport::binary_bundle({"mini", "medium", "base"}, {0, 1, 0, 1},
                                             {{0.9, 0.6, 0.7, 0.8}, {0.6, 0.7, 0.8, 0.9}, {0.5, 0.5, 0.5, 0.5}});
    CascadePlan plan(bundle, all_models(bundle), {});
    auto endpoints = threshold_grid(plan, 2);
    REQUIRE(endpoints.size() == 2);
    for (const auto& stage : endpoints) {
        CHECK(stage == std::vector<double>{plan.min_threshold(), plan.max_threshold()});
    }
    auto grid = threshold_grid(plan, 6);
    for (const auto& stage : grid) {
        CHECK(std::is_sorted(stage.begin(), stage.end()));
        CHECK(std::adjacent_find(stage.begin(), stage.end()) == stage.end());
        CHECK(stage.front() == plan.min_threshold());
        CHECK(stage.back() == plan.max_threshold());
    }
    CHECK_THROWS_AS(threshold_grid(plan, 1), Error);
}

TEST_CASE("sweep sizes and the all-min point") {
    auto spec = make_synth_spec(300, 2, {{"mini", 0.7}, {"medium", 0.75}, {"base", 0.85}}, 2.0, 100, 5);
    auto bundle = generate(spec);
    std::vector<std::string> two = {"mini", "base"};
    CascadePlan k2(bundle, two, {});
    ThresholdGrid five = {{0.5, 0.6, 0.7, 0.8, 0.9}};
    auto s2 = sweep(k2, Mode::Sequential, five);
    CHECK(s2.size() == 5);
    CHECK(s2.front().accuracy == bundle.standalone_accuracy(0));
    CHECK(s2.front().mean_cost == bundle.standalone_cost(0));

    CascadePlan k3(bundle, all_models(bundle), {});
    auto grid = threshold_grid(k3, 10);
    REQUIRE(grid[0].size() == 10);
    REQUIRE(grid[1].size() == 10);
    auto s3 = sweep(k3, Mode::Sequential, grid);
    CHECK(s3.size() == 100);
    CHECK(sweep_size(grid, Mode::Sequential) == 100);
    CHECK(s3.front().accuracy == bundle.standalone_accuracy(0));
    CHECK(s3.back().accuracy == bundle.standalone_accuracy(2));

    SweepOptions capped;
    capped.max_points = 99;
    CHECK_THROWS_AS(sweep(k3, Mode::Sequential, grid, capped), Error);

    SweepOptions threaded;
    threaded.threads = 4;
    auto par = sweep(k3, Mode::Sequential, grid, threaded);
    REQUIRE(par.size() == s3.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
        CHECK(par[i].mean_cost == s3[i].mean_cost);
        CHECK(par[i].accuracy == s3[i].accuracy);
        CHECK(par[i].thresholds == s3[i].thresholds);
    }

    auto routed = sweep(k3, Mode::Routing, grid);
    CHECK(routed.size() == sweep_size(grid, Mode::Routing));
    for (const auto& p : routed) {
        REQUIRE(p.skip_thresholds.size() == 2);
        CHECK(p.skip_thresholds[0] <= p.thresholds[0]);
    }
}

TEST_CASE("pareto frontier") {
    CHECK(pairs(pareto_frontier(pts({{1, 80}, {2, 79}}))) == P{{1, 80}});
    CHECK(pairs(pareto_frontier(pts({{1, 70}, {2, 90}}))) == P{{1, 70}, {2, 90}});
    CHECK(pairs(pareto_frontier(pts({{1, 70}, {1, 75}, {2, 75}}))) == P{{1, 75}});
    CHECK(pairs(pareto_frontier(pts({{3, 90}, {1, 70}, {2, 80}, {2.5, 79}}))) == P{{1, 70}, {2, 80}, {3, 90}});
    CHECK(pareto_frontier(std::vector<CurvePoint>{}).empty());
}

TEST_CASE("auc") {
    CHECK(auc(pts({{0, 80}, {1, 80}})) == 80.0);
    CHECK(auc(pts({{0, 70}, {1, 90}})) == 80.0);
    CHECK(auc(pts({{0, 70}, {1, 70}, {2, 90}})) == 75.0);
    CHECK(auc(pts({{5, 66}})) == 66.0);
    CHECK(auc(pts({{1e9, 70}, {3e9, 90}})) == 80.0);
    CHECK_THROWS_AS(auc(std::vector<CurvePoint>{}), Error);

    // flat extension to the most expensive achievable point
    CHECK(auc(pts({{0, 70}, {1, 90}}), 3.0) == 260.0 / 3.0);
    CHECK(auc(pts({{0, 70}, {1, 90}}), 1.0) == 80.0);
    CHECK(auc(pts({{2, 60}}), 4.0) == 60.0);
}

TEST_CASE("matched cost") {
    auto frontier = pts({{2, 85}, {10, 90}});
    auto m = matched_cost(frontier, 87.5, 12.0);
    REQUIRE(m);
    CHECK(m->cascade_cost == 6.0);
    CHECK(m->improvement_percent == 50.0);

    auto below = matched_cost(frontier, 80.0, 4.0);
    REQUIRE(below);
    CHECK(below->cascade_cost == 2.0);
    CHECK(below->improvement_percent == 50.0);

    auto exact = matched_cost(frontier, 90.0, 10.0);
    REQUIRE(exact);
    CHECK(exact->cascade_cost == 10.0);
    CHECK(exact->improvement_percent == 0.0);

    CHECK(!matched_cost(frontier, 95.0, 10.0));
}

TEST_CASE("max accuracy gain") {
    CHECK(max_accuracy_gain(pts({{1, 88}, {2, 90.39}}), 89.99) == doctest::Approx(0.40));
    CHECK(max_accuracy_gain(pts({{1, 88}, {2, 90}}), 90.0) == 0.0);
}

TEST_CASE("summarize") {
    auto bundle = generate(make_synth_spec(500, 2, {{"mini", 0.7}, {"base", 0.85}}, 3.0, 100, 9));
    CascadePlan plan(bundle, all_models(bundle), {});
    auto points = sweep(plan, Mode::Sequential, threshold_grid(plan, 20));
    auto summary = summarize(plan, points);
    CHECK(summary.points.front().accuracy == bundle.standalone_accuracy(0));
    CHECK(summary.matched.size() == 2);
    CHECK(summary.max_accuracy >= bundle.standalone_accuracy(1));
    REQUIRE(summary.matched[1].match);
    CHECK(summary.matched[1].match->cascade_cost <= bundle.standalone_cost(1));
    auto at = frontier_point_at(summary.points, bundle.standalone_accuracy(1));
    REQUIRE(at);
    CHECK(at->accuracy >= bundle.standalone_accuracy(1));
}
