#include <cmath>
#include <limits>
#include <stdexcept>
#include <random>

#include "doctest.h"
#include "pmarket/belief.hpp"

using namespace pm;

namespace {

// Brute-force Bayes oracle: enumerate every (s, signal, s') triple of the
// joint distribution and marginalize, with no factored prediction step.
std::vector<double> brute_force_posterior(const std::vector<double>& prior, int action,
                                          int obs, const TransitionModel& t,
                                          const ObservationModel& w,
                                          const std::vector<double>& signal_prior) {
    const int n = t.n_states;
    std::vector<double> post(static_cast<std::size_t>(n), 0.0);
    double total = 0.0;
    for (int s = 0; s < n; ++s) {
        for (int i = 0; i < w.n_signals; ++i) {
            for (int s2 = 0; s2 < n; ++s2) {
                const double joint =
                    prior[s] * signal_prior[i] * t.at(s, action, s2) * w.at(s2, i, obs);
                post[s2] += joint;
                total += joint;
            }
        }
    }
    for (double& v : post) v /= total;
    return post;
}

TransitionModel random_transition(std::mt19937& rng, int n_states, int n_actions) {
    TransitionModel t;
    t.n_states = n_states;
    t.n_actions = n_actions;
    t.t.resize(static_cast<std::size_t>(n_states) * n_actions * n_states);
    std::uniform_real_distribution<double> unit(0.01, 1.0);
    for (int s = 0; s < n_states; ++s) {
        for (int a = 0; a < n_actions; ++a) {
            double sum = 0.0;
            for (int s2 = 0; s2 < n_states; ++s2) {
                t.at(s, a, s2) = unit(rng);
                sum += t.at(s, a, s2);
            }
            for (int s2 = 0; s2 < n_states; ++s2) t.at(s, a, s2) /= sum;
        }
    }
    return t;
}

ObservationModel random_observation(std::mt19937& rng, int n_states, int n_signals,
                                    int n_obs) {
    ObservationModel w;
    w.n_states = n_states;
    w.n_signals = n_signals;
    w.n_obs = n_obs;
    w.w.resize(static_cast<std::size_t>(n_states) * n_signals * n_obs);
    std::uniform_real_distribution<double> unit(0.01, 1.0);
    for (int s2 = 0; s2 < n_states; ++s2) {
        for (int i = 0; i < n_signals; ++i) {
            double sum = 0.0;
            for (int o = 0; o < n_obs; ++o) {
                w.at(s2, i, o) = unit(rng);
                sum += w.at(s2, i, o);
            }
            for (int o = 0; o < n_obs; ++o) w.at(s2, i, o) /= sum;
        }
    }
    return w;
}

std::vector<double> random_simplex(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> unit(0.01, 1.0);
    std::vector<double> p(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (double& v : p) {
        v = unit(rng);
        sum += v;
    }
    for (double& v : p) v /= sum;
    return p;
}

}  // namespace

TEST_SUITE("belief") {

TEST_CASE("uniform prior") {
    const BeliefState b5 = uniform_prior(5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(b5[i] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(uniform_prior(1).probs == std::vector<double>{1.0});
    double sum = 0.0;
    for (double v : uniform_prior(101).probs) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(uniform_prior(0), std::invalid_argument);
}

TEST_CASE("uninformative update returns the prior") {
    // identity transition, observation constant across states
    const int n = 4;
    TransitionModel t;
    t.n_states = n;
    t.n_actions = 1;
    t.t.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int s = 0; s < n; ++s) t.at(s, 0, s) = 1.0;
    ObservationModel w;
    w.n_states = n;
    w.n_signals = 1;
    w.n_obs = 2;
    w.w.assign(static_cast<std::size_t>(n) * 2, 0.5);

    std::mt19937 rng(12);
    const BeliefState prior{random_simplex(rng, n)};
    const BeliefState post = update_belief(prior, 0, 1, t, w, {1.0});
    for (int s = 0; s < n; ++s) {
        CHECK(post[s] == doctest::Approx(prior[s]).epsilon(1e-14));
    }
}

TEST_CASE("point-mass observation pins the posterior") {
    const int n = 5;
    TransitionModel t;
    t.n_states = n;
    t.n_actions = 1;
    t.t.assign(static_cast<std::size_t>(n) * n, 1.0 / n);  // anything-to-anything
    ObservationModel w;
    w.n_states = n;
    w.n_signals = 1;
    w.n_obs = n;
    w.w.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int s = 0; s < n; ++s) w.at(s, 0, s) = 1.0;  // obs identifies the state

    const BeliefState post = update_belief(uniform_prior(n), 0, 3, t, w, {1.0});
    for (int s = 0; s < n; ++s) {
        CHECK(post[s] == doctest::Approx(s == 3 ? 1.0 : 0.0).epsilon(1e-14));
    }
    // entropy of the posterior is zero regardless of the (positive) prior
    std::mt19937 rng(5);
    const BeliefState post2 = update_belief(BeliefState{random_simplex(rng, n)}, 0, 2, t, w,
                                            {1.0});
    CHECK(post2[2] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("matches the brute-force Bayes oracle on random models") {
    std::mt19937 rng(20231111);
    std::uniform_int_distribution<int> states(2, 6);
    std::uniform_int_distribution<int> obs_count(2, 5);
    for (int rep = 0; rep < 1200; ++rep) {
        const int n = states(rng);
        const int n_obs = obs_count(rng);
        const TransitionModel t = random_transition(rng, n, 3);
        const ObservationModel w = random_observation(rng, n, 3, n_obs);
        const std::vector<double> sp = random_simplex(rng, 3);
        const std::vector<double> prior = random_simplex(rng, n);
        const int action = std::uniform_int_distribution<int>(0, 2)(rng);
        const int obs = std::uniform_int_distribution<int>(0, n_obs - 1)(rng);

        const BeliefState post =
            update_belief(BeliefState{prior}, action, obs, t, w, sp);
        const std::vector<double> expected =
            brute_force_posterior(prior, action, obs, t, w, sp);

        double sum = 0.0;
        for (int s = 0; s < n; ++s) {
            CHECK(std::abs(post[s] - expected[s]) <= 1e-12);
            sum += post[s];
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("likelihood ordering: raising a state's likelihood never lowers it") {
    std::mt19937 rng(606);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 4;
        const TransitionModel t = random_transition(rng, n, 1);
        ObservationModel w = random_observation(rng, n, 2, 3);
        const std::vector<double> sp = random_simplex(rng, 2);
        const std::vector<double> prior = random_simplex(rng, n);
        const int obs = 1;
        const int target = std::uniform_int_distribution<int>(0, n - 1)(rng);

        const BeliefState before = update_belief(BeliefState{prior}, 0, obs, t, w, sp);
        // scale the target state's likelihood of the received observation up,
        // renormalizing its observation row
        for (int i = 0; i < 2; ++i) {
            w.at(target, i, obs) *= 4.0;
            double sum = 0.0;
            for (int o = 0; o < 3; ++o) sum += w.at(target, i, o);
            for (int o = 0; o < 3; ++o) w.at(target, i, o) /= sum;
        }
        const BeliefState after = update_belief(BeliefState{prior}, 0, obs, t, w, sp);
        CHECK(after[target] >= before[target] - 1e-12);
    }
}

TEST_CASE("impossible observation falls back to the prediction") {
    const int n = 3;
    TransitionModel t;
    t.n_states = n;
    t.n_actions = 1;
    t.t.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int s = 0; s < n; ++s) t.at(s, 0, (s + 1) % n) = 1.0;  // cyclic shift
    ObservationModel w;
    w.n_states = n;
    w.n_signals = 1;
    w.n_obs = 2;
    w.w.assign(static_cast<std::size_t>(n) * 2, 0.0);
    for (int s = 0; s < n; ++s) w.at(s, 0, 0) = 1.0;  // observation 1 never occurs

    bool degenerate = false;
    const BeliefState post =
        update_belief(uniform_prior(n), 0, 1, t, w, {1.0}, &degenerate);
    CHECK(degenerate);
    double sum = 0.0;
    for (int s = 0; s < n; ++s) sum += post[s];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    // prediction of the uniform prior through a permutation is uniform
    for (int s = 0; s < n; ++s) CHECK(post[s] == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("dimension mismatches are rejected") {
    TransitionModel t;
    t.n_states = 3;
    t.n_actions = 1;
    t.t.assign(9, 1.0 / 3.0);
    ObservationModel w;
    w.n_states = 3;
    w.n_signals = 1;
    w.n_obs = 2;
    w.w.assign(6, 0.5);
    CHECK_THROWS_AS(update_belief(uniform_prior(4), 0, 0, t, w, {1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(update_belief(uniform_prior(3), 5, 0, t, w, {1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(update_belief(uniform_prior(3), 0, 9, t, w, {1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(update_belief(uniform_prior(3), 0, 0, t, w, {0.5, 0.5}),
                    std::invalid_argument);
}

TEST_CASE("outcome belief maps states to prices") {
    const StateSpace space = build_state_space(QuantityVector({0, 0}), 1, 10, 10);
    const Liquidity b(10);

    BeliefState point;  // all mass on the symmetric state
    point.probs.assign(static_cast<std::size_t>(space.size()), 0.0);
    point.probs[space.initial_index()] = 1.0;
    CHECK(outcome_belief(point, b, space) == doctest::Approx(0.5).epsilon(1e-14));

    BeliefState shifted;  // all mass on traded-quantity offset +10
    shifted.probs.assign(static_cast<std::size_t>(space.size()), 0.0);
    shifted.probs[space.initial_index() + 10] = 1.0;
    CHECK(outcome_belief(shifted, b, space) ==
          doctest::Approx(0.7310585786300049).epsilon(1e-12));

    // uniform over symmetric states pairs to exactly one half
    CHECK(outcome_belief(uniform_prior(space.size()), b, space) ==
          doctest::Approx(0.5).epsilon(1e-12));
}

}  // TEST_SUITE
