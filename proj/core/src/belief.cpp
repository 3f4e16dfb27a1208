#include "pmarket/belief.hpp"

#include <stdexcept>

namespace pm {

BeliefState uniform_prior(int state_count) {
    if (state_count < 1) {
        throw std::invalid_argument("uniform_prior needs at least one state");
    }
    BeliefState b;
    b.probs.assign(static_cast<std::size_t>(state_count), 1.0 / state_count);
    return b;
}

BeliefState update_belief(const BeliefState& prev, int action_idx, int obs_idx,
                          const TransitionModel& transition,
                          const ObservationModel& observation,
                          const std::vector<double>& signal_prior,
                          bool* degenerate) {
    const int n = transition.n_states;
    if (static_cast<int>(prev.size()) != n || observation.n_states != n) {
        throw std::invalid_argument("belief/model state dimensions disagree");
    }
    if (action_idx < 0 || action_idx >= transition.n_actions) {
        throw std::invalid_argument("action index out of range");
    }
    if (obs_idx < 0 || obs_idx >= observation.n_obs) {
        throw std::invalid_argument("observation index out of range");
    }
    if (static_cast<int>(signal_prior.size()) != observation.n_signals) {
        throw std::invalid_argument("signal prior length != model signal count");
    }

    // Prediction: push the prior through the agent's own-action dynamics.
    std::vector<double> predicted(static_cast<std::size_t>(n), 0.0);
    for (int s = 0; s < n; ++s) {
        const double ps = prev[s];
        if (ps == 0.0) continue;
        for (int s2 = 0; s2 < n; ++s2) {
            predicted[s2] += transition.at(s, action_idx, s2) * ps;
        }
    }

    // Correction: weight by the observation likelihood, marginalizing the
    // true signal under its prior.
    std::vector<double> posterior(static_cast<std::size_t>(n), 0.0);
    double total = 0.0;
    for (int s2 = 0; s2 < n; ++s2) {
        double lik = 0.0;
        for (int i = 0; i < observation.n_signals; ++i) {
            lik += signal_prior[i] * observation.at(s2, i, obs_idx);
        }
        posterior[s2] = lik * predicted[s2];
        total += posterior[s2];
    }

    if (degenerate) *degenerate = false;
    if (total <= 0.0) {
        // Observation impossible under the model; fall back to prediction.
        if (degenerate) *degenerate = true;
        double psum = 0.0;
        for (double v : predicted) psum += v;
        if (psum > 0.0) {
            for (double& v : predicted) v /= psum;
        }
        return BeliefState{std::move(predicted)};
    }
    for (double& v : posterior) v /= total;
    return BeliefState{std::move(posterior)};
}

double outcome_belief(const BeliefState& belief, Liquidity b, const StateSpace& space) {
    if (static_cast<int>(belief.size()) != space.size()) {
        throw std::invalid_argument("belief length != state space size");
    }
    double p = 0.0;
    for (int s = 0; s < space.size(); ++s) {
        if (belief[s] == 0.0) continue;
        p += belief[s] * price(space.quantity(s), b)[space.traded_security()];
    }
    return p;
}

}  // namespace pm
