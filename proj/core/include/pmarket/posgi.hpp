#ifndef PMARKET_POSGI_HPP
#define PMARKET_POSGI_HPP

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "pmarket/lmsr.hpp"

namespace pm {

/// One-unit trade decision. The per-period cap of one unit per agent is part
/// of the market rules, so the action alphabet is fixed.
enum class TradeAction : int { sell = -1, hold = 0, buy = +1 };

constexpr int to_int(TradeAction a) { return static_cast<int>(a); }
TradeAction trade_action_from_int(int v);

/// Dense index in {0,1,2} for {sell,hold,buy}; used by transition tensors.
constexpr int action_index(TradeAction a) { return to_int(a) + 1; }
constexpr int kNumActions = 3;
TradeAction action_from_index(int idx);

using JointAction = std::vector<TradeAction>;

/// External information cue about the event outcome.
enum class InfoSignal : int { negative = -1, none = 0, positive = +1 };

constexpr int to_int(InfoSignal s) { return static_cast<int>(s); }
constexpr int signal_index(InfoSignal s) { return to_int(s) + 1; }
constexpr int kNumSignals = 3;
InfoSignal signal_from_index(int idx);

/// Information arrival process: a Poisson count of arrivals per trading
/// period; an arriving signal is positive with probability positive_prob
/// when the event will occur (and 1-positive_prob when it will not); each
/// agent independently observes the true signal with probability
/// `reliability` and a blank otherwise.
struct InfoModel {
    double rate = 0.5;
    double positive_prob = 0.8;
    double reliability = 0.9;

    void validate() const;
};

/// Market state: outstanding quantities plus the trading-period index.
struct MarketState {
    QuantityVector q;
    int period = 0;
};

/// What one agent sees each period: the posted price of the traded security
/// and its private information signal.
struct Observation {
    double posted_price = 0.0;
    InfoSignal signal = InfoSignal::none;
};

/// Enumeration of the traded security's quantity levels reachable by integer
/// unit trades: {q0 - max_units, ..., q0 + max_units}. The index mapping is
/// bijective and the initial quantity sits at index max_units.
class StateSpace {
public:
    StateSpace(QuantityVector initial_q, std::size_t traded_security,
               int max_units, int horizon);

    int size() const { return 2 * max_units_ + 1; }
    int max_units() const { return max_units_; }
    int horizon() const { return horizon_; }
    std::size_t traded_security() const { return traded_; }
    int initial_index() const { return max_units_; }
    const QuantityVector& initial_quantity() const { return initial_q_; }

    double traded_quantity(int index) const;
    QuantityVector quantity(int index) const;

    /// Index for a traded-security quantity offset from the initial level;
    /// out-of-range offsets clamp to the boundary.
    int clamp_offset(long long offset) const;

    /// Exact index of a traded quantity, or -1 when it is not on the grid.
    int index_of_quantity(double traded_quantity) const;

private:
    QuantityVector initial_q_;
    std::size_t traded_;
    int max_units_;
    int horizon_;
};

StateSpace build_state_space(QuantityVector initial_q, std::size_t traded_security,
                             int max_units, int horizon);

/// Applies a joint action: the traded quantity moves by the algebraic sum of
/// the agents' unit trades and the period advances. A move past the state
/// bounds is clamped; `truncated`, when given, reports that the clamp fired.
MarketState transition(const MarketState& s, const JointAction& a,
                       const StateSpace& space, bool* truncated = nullptr);

/// Draws the period's signals: one shared arrival process, one true signal,
/// independent per-agent observation noise.
std::vector<InfoSignal> sample_signals(std::mt19937_64& rng, const InfoModel& model,
                                       int outcome, int n_agents);

Observation observe(const MarketState& s, Liquidity b, InfoSignal signal,
                    const StateSpace& space);

/// Single-agent transition tensor T[s][a][s'] with opponents marginalized
/// under the given per-opponent action distribution. Rows are normalized.
struct TransitionModel {
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> t;

    double at(int s, int a, int s2) const {
        return t[(static_cast<std::size_t>(s) * n_actions + a) * n_states + s2];
    }
    double& at(int s, int a, int s2) {
        return t[(static_cast<std::size_t>(s) * n_actions + a) * n_states + s2];
    }
    void validate() const;
};

/// Observation likelihood tensor Omega[s'][signal][obs]. Rows over the
/// finite observation grid are normalized per (s', signal).
struct ObservationModel {
    int n_states = 0;
    int n_signals = 0;
    int n_obs = 0;
    std::vector<double> w;

    double at(int s2, int i, int o) const {
        return w[(static_cast<std::size_t>(s2) * n_signals + i) * n_obs + o];
    }
    double& at(int s2, int i, int o) {
        return w[(static_cast<std::size_t>(s2) * n_signals + i) * n_obs + o];
    }
    void validate() const;
};

std::array<double, 3> uniform_action_probs();

TransitionModel single_agent_transition(const StateSpace& space, int n_opponents,
                                        const std::array<double, 3>& opponent_action_probs);

/// Observation grid for the market: one observation per (price state, own
/// signal) pair, indexed obs = state*3 + signal_index. The posted price
/// identifies its state exactly; all noise lives in the signal channel.
ObservationModel price_signal_observation_model(const StateSpace& space,
                                                double reliability);
int observation_index(const StateSpace& space, int price_state_index, InfoSignal signal);

/// Prior P(iota) over the true period signal {-1,0,+1} implied by the
/// arrival process and an outcome prior (0.5 unless the agent knows more).
std::array<double, 3> signal_prior(const InfoModel& model, double outcome_prob = 0.5);

}  // namespace pm

#endif  // PMARKET_POSGI_HPP
