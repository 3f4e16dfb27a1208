#include <cmath>
#include <limits>
#include <stdexcept>
#include <random>

#include "doctest.h"
#include "pmarket/risk.hpp"

using namespace pm;

TEST_SUITE("risk") {

TEST_CASE("risk preference bounds") {
    CHECK_THROWS_AS(RiskPreference(1.0), std::invalid_argument);
    CHECK_THROWS_AS(RiskPreference(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(RiskPreference(2.5), std::invalid_argument);
    CHECK(RiskPreference(0.8).theta() == 0.8);
}

TEST_CASE("closed-form spot values") {
    CHECK(crra(1.0, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(crra(0.25, 0.0) == 0.25);  // exact identity at theta 0
    // cos(pi/2) under the principal-branch rule
    CHECK(std::abs(crra(-1.0, 0.5)) <= 1e-12);
    // the signed-power alternative keeps the sign instead
    CHECK(crra(-1.0, 0.5, NegativeRewardRule::signed_power) ==
          doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(crra(0.0, 0.7) == 0.0);
}

TEST_CASE("identity at theta zero is exact") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> r(-50.0, 50.0);
    for (int rep = 0; rep < 1000; ++rep) {
        const double reward = r(rng);
        CHECK(crra(reward, 0.0) == reward);
    }
}

TEST_CASE("strictly increasing on positive rewards") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> theta_dist(-0.99, 0.99);
    for (int rep = 0; rep < 200; ++rep) {
        const double theta = theta_dist(rng);
        double prev = crra(0.01, theta);
        for (double reward = 0.05; reward <= 10.0; reward += 0.05) {
            const double u = crra(reward, theta);
            CHECK(u > prev);
            prev = u;
        }
    }
}

TEST_CASE("concavity and convexity by risk attitude") {
    std::vector<double> grid;
    for (double r = 0.1; r <= 10.0 + 1e-12; r += 0.1) grid.push_back(r);
    CHECK(concavity_check(0.8, grid));       // risk averse: concave
    CHECK(concavity_check(0.0, grid));       // affine counts as weakly concave
    CHECK_FALSE(concavity_check(-0.5, grid));  // risk seeking: convex

    // convexity of the risk-seeking branch: negated second differences
    bool convex = true;
    double prev_slope = (crra(grid[1], -0.5) - crra(grid[0], -0.5)) / (grid[1] - grid[0]);
    for (std::size_t i = 2; i < grid.size(); ++i) {
        const double slope =
            (crra(grid[i], -0.5) - crra(grid[i - 1], -0.5)) / (grid[i] - grid[i - 1]);
        if (slope - prev_slope < -1e-9) convex = false;
        prev_slope = slope;
    }
    CHECK(convex);

    CHECK_THROWS_AS(concavity_check(0.5, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(concavity_check(0.5, {1.0, -1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(concavity_check(0.5, {1.0, 1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("finite output for finite input across the theta range") {
    std::mt19937 rng(123);
    std::uniform_real_distribution<double> theta_dist(-0.99, 0.99);
    std::uniform_real_distribution<double> r(-100.0, 100.0);
    for (int rep = 0; rep < 2000; ++rep) {
        const double u = crra(r(rng), theta_dist(rng));
        CHECK(std::isfinite(u));
        const double us = crra(r(rng), theta_dist(rng), NegativeRewardRule::signed_power);
        CHECK(std::isfinite(us));
    }
    CHECK_THROWS_AS(crra(std::numeric_limits<double>::infinity(), 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(crra(1.0, std::nan("")), std::invalid_argument);
}

TEST_CASE("log branch at theta one") {
    CHECK(crra(std::exp(1.0), 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(crra(-std::exp(1.0), 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("principal-branch sign flips with theta") {
    // (1-theta) < 1/2 pi-fraction keeps cos positive above theta = 1/2
    CHECK(crra(-1.0, 0.8) > 0.0);   // cos(0.2 pi) > 0
    CHECK(crra(-1.0, 0.25) < 0.0);  // cos(0.75 pi) < 0
    CHECK(crra(-2.0, 0.8) > crra(-1.0, 0.8));  // grows with |R| on this branch
}

}  // TEST_SUITE
