#ifndef PMARKET_BELIEF_HPP
#define PMARKET_BELIEF_HPP

#include <vector>

#include "pmarket/posgi.hpp"

namespace pm {

/// Probability vector over the enumerated state set; entries >= 0 and
/// summing to 1 within 1e-12.
struct BeliefState {
    std::vector<double> probs;

    std::size_t size() const { return probs.size(); }
    double operator[](std::size_t i) const { return probs[i]; }
};

BeliefState uniform_prior(int state_count);

/// One Bayes filtering step:
///   posterior(s') ∝ sum_i P(i) Omega(s',i,obs) * sum_s T(s,a,s') prior(s)
/// normalized over s'. If the observation has zero likelihood under every
/// state (possible when bound clamping truncates the dynamics), the
/// prediction-only belief sum_s T(s,a,s') prior(s) is returned instead and
/// `degenerate`, when given, is set.
BeliefState update_belief(const BeliefState& prev, int action_idx, int obs_idx,
                          const TransitionModel& transition,
                          const ObservationModel& observation,
                          const std::vector<double>& signal_prior,
                          bool* degenerate = nullptr);

/// Event-outcome probability implied by a state belief: the belief-weighted
/// instantaneous price of the traded security.
double outcome_belief(const BeliefState& belief, Liquidity b, const StateSpace& space);

}  // namespace pm

#endif  // PMARKET_BELIEF_HPP
