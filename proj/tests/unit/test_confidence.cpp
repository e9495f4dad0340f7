#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "cascade/confidence.hpp"
#include "cascade/error.hpp"

using namespace cascade;
using V = std::vector<double>;

TEST_CASE("max_prob") {
    CHECK(max_prob(V{0.25, 0.25, 0.25, 0.25}).value == 0.25);
    CHECK(max_prob(V{1.0, 0.0, 0.0}).value == 1.0);
    CHECK(max_prob(V{0.1, 0.6, 0.3}).value == 0.6);
    CHECK(max_prob(V{0.1, 0.6, 0.3}).policy == Policy::MaxProb);
}

TEST_CASE("distance to uniform") {
    CHECK(dtu(V{0.5, 0.5}).value == 0.0);
    CHECK(dtu(V{0.25, 0.25, 0.25, 0.25}).value == 0.0);
    CHECK(dtu(V{1.0, 0.0, 0.0, 0.0}).value == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
    CHECK(std::abs(dtu(V{1.0, 0.0, 0.0, 0.0}).value - 0.86603) < 1e-5);
    CHECK(std::abs(dtu(V{0.9, 0.1}).value - 0.56569) < 1e-5);
    CHECK(dtu(V{0.9, 0.1}).value == doctest::Approx(std::sqrt(2.0) * 0.4).epsilon(1e-15));
}

TEST_CASE("binary DTU is an increasing function of MaxProb") {
    for (double p = 0.5; p <= 1.0; p += 0.01) {
        const double q = p + 0.005;
        if (q > 1.0) break;
        CHECK(dtu(V{p, 1 - p}).value < dtu(V{q, 1 - q}).value);
    }
}

TEST_CASE("random confidence") {
    CHECK(random_conf(3, "q1", 1).value == random_conf(3, "q1", 1).value);
    CHECK(random_conf(3, "q1", 1).value != random_conf(3, "q1", 2).value);

    int differing = 0;
    for (int i = 0; i < 1000; ++i) {
        const std::string id = "id" + std::to_string(i);
        if (random_conf(1, id, 1).value != random_conf(2, id, 1).value) ++differing;
    }
    CHECK(differing >= 990);

    double sum = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double v = random_conf(42, "s" + std::to_string(i), 1).value;
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
        sum += v;
    }
    const double mean = sum / 10000.0;
    CHECK(mean >= 0.48);
    CHECK(mean <= 0.52);
}

TEST_CASE("length heuristic") {
    CHECK(heuristic_conf(100, 100).value == 0.0);
    CHECK(heuristic_conf(1, 100).value == doctest::Approx(0.99).epsilon(1e-15));
    CHECK(heuristic_conf(50, 100).value == 0.5);
    CHECK(heuristic_conf(300, 100).value == 0.0);
    CHECK(heuristic_conf(1, 100, true).value == doctest::Approx(0.01));
    CHECK_THROWS_AS(heuristic_conf(0, 100), Error);
}

TEST_CASE("threshold endpoints bracket every attainable confidence") {
    for (std::size_t y : {2u, 3u, 10u}) {
        for (Policy p : {Policy::MaxProb, Policy::DTU, Policy::Random, Policy::Heuristic}) {
            const auto r = confidence_range(p, y);
            CHECK(policy_min_threshold(p, y) == r.lo);
            CHECK(policy_max_threshold(p, y) > r.hi);
        }
    }
    CHECK(policy_min_threshold(Policy::MaxProb, 4) == 0.25);
}

TEST_CASE("policy names") {
    CHECK(parse_policy("MaxProb") == Policy::MaxProb);
    CHECK(parse_policy("dtu") == Policy::DTU);
    CHECK(!parse_policy("entropy"));
    for (Policy p : {Policy::MaxProb, Policy::DTU, Policy::Random, Policy::Heuristic}) {
        CHECK(parse_policy(to_string(p)) == p);
    }
}
