#include "pmarket/posgi.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pm {

TradeAction trade_action_from_int(int v) {
    if (v < -1 || v > 1) {
        throw std::invalid_argument("trade action must be -1, 0 or +1");
    }
    return static_cast<TradeAction>(v);
}

TradeAction action_from_index(int idx) {
    if (idx < 0 || idx >= kNumActions) {
        throw std::invalid_argument("action index must be 0, 1 or 2");
    }
    return static_cast<TradeAction>(idx - 1);
}

InfoSignal signal_from_index(int idx) {
    if (idx < 0 || idx >= kNumSignals) {
        throw std::invalid_argument("signal index must be 0, 1 or 2");
    }
    return static_cast<InfoSignal>(idx - 1);
}

void InfoModel::validate() const {
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("info rate must be >= 0");
    }
    if (!(positive_prob >= 0.0 && positive_prob <= 1.0)) {
        throw std::invalid_argument("positive_prob must lie in [0,1]");
    }
    if (!(reliability >= 0.0 && reliability <= 1.0)) {
        throw std::invalid_argument("reliability must lie in [0,1]");
    }
}

StateSpace::StateSpace(QuantityVector initial_q, std::size_t traded_security,
                       int max_units, int horizon)
    : initial_q_(std::move(initial_q)),
      traded_(traded_security),
      max_units_(max_units),
      horizon_(horizon) {
    if (traded_ >= initial_q_.size()) {
        throw std::invalid_argument("traded security index out of range");
    }
    if (max_units_ <= 0) {
        throw std::invalid_argument("max_units must be positive");
    }
    if (horizon_ < 1) {
        throw std::invalid_argument("horizon must be >= 1");
    }
}

StateSpace build_state_space(QuantityVector initial_q, std::size_t traded_security,
                             int max_units, int horizon) {
    return StateSpace(std::move(initial_q), traded_security, max_units, horizon);
}

double StateSpace::traded_quantity(int index) const {
    if (index < 0 || index >= size()) {
        throw std::invalid_argument("state index out of range");
    }
    return initial_q_[traded_] + static_cast<double>(index - max_units_);
}

QuantityVector StateSpace::quantity(int index) const {
    return initial_q_.shifted(traded_, static_cast<double>(index - max_units_));
}

int StateSpace::clamp_offset(long long offset) const {
    long long idx = static_cast<long long>(max_units_) + offset;
    if (idx < 0) return 0;
    if (idx >= size()) return size() - 1;
    return static_cast<int>(idx);
}

int StateSpace::index_of_quantity(double traded_quantity) const {
    const double offset = traded_quantity - initial_q_[traded_];
    const double rounded = std::round(offset);
    if (std::abs(offset - rounded) > 1e-9) return -1;
    const long long idx = static_cast<long long>(rounded) + max_units_;
    if (idx < 0 || idx >= size()) return -1;
    return static_cast<int>(idx);
}

MarketState transition(const MarketState& s, const JointAction& a,
                       const StateSpace& space, bool* truncated) {
    if (s.period >= space.horizon() - 1) {
        throw std::invalid_argument("transition past the market horizon");
    }
    int net = 0;
    for (TradeAction act : a) net += to_int(act);

    const int cur = space.index_of_quantity(s.q[space.traded_security()]);
    if (cur < 0) {
        throw std::invalid_argument("market state is not on the enumerated grid");
    }
    const long long raw = static_cast<long long>(cur) + net;
    int next = cur + net;
    bool clipped = false;
    if (raw < 0 || raw >= space.size()) {
        next = space.clamp_offset(raw - space.initial_index());
        clipped = true;
    }
    if (truncated) *truncated = clipped;

    MarketState out{s.q, s.period + 1};
    out.q.add(space.traded_security(),
              space.traded_quantity(next) - s.q[space.traded_security()]);
    return out;
}

std::vector<InfoSignal> sample_signals(std::mt19937_64& rng, const InfoModel& model,
                                       int outcome, int n_agents) {
    model.validate();
    std::vector<InfoSignal> out(static_cast<std::size_t>(n_agents), InfoSignal::none);

    std::poisson_distribution<int> arrivals(model.rate);
    const int count = model.rate > 0.0 ? arrivals(rng) : 0;
    if (count < 1) return out;

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double p_positive = outcome == 1 ? model.positive_prob : 1.0 - model.positive_prob;
    const InfoSignal truth =
        unit(rng) < p_positive ? InfoSignal::positive : InfoSignal::negative;
    for (auto& s : out) {
        s = unit(rng) < model.reliability ? truth : InfoSignal::none;
    }
    return out;
}

Observation observe(const MarketState& s, Liquidity b, InfoSignal signal,
                    const StateSpace& space) {
    return Observation{price(s.q, b)[space.traded_security()], signal};
}

void TransitionModel::validate() const {
    for (int s = 0; s < n_states; ++s) {
        for (int a = 0; a < n_actions; ++a) {
            double sum = 0.0;
            for (int s2 = 0; s2 < n_states; ++s2) sum += at(s, a, s2);
            if (std::abs(sum - 1.0) > 1e-12) {
                throw std::invalid_argument("transition row (" + std::to_string(s) + "," +
                                            std::to_string(a) + ") sums to " +
                                            std::to_string(sum));
            }
        }
    }
}

void ObservationModel::validate() const {
    for (int s2 = 0; s2 < n_states; ++s2) {
        for (int i = 0; i < n_signals; ++i) {
            double sum = 0.0;
            for (int o = 0; o < n_obs; ++o) sum += at(s2, i, o);
            if (std::abs(sum - 1.0) > 1e-12) {
                throw std::invalid_argument("observation row (" + std::to_string(s2) + "," +
                                            std::to_string(i) + ") sums to " +
                                            std::to_string(sum));
            }
        }
    }
}

std::array<double, 3> uniform_action_probs() {
    return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
}

TransitionModel single_agent_transition(const StateSpace& space, int n_opponents,
                                        const std::array<double, 3>& opponent_action_probs) {
    if (n_opponents < 0) {
        throw std::invalid_argument("n_opponents must be >= 0");
    }
    // Distribution of the opponents' summed unit trades, by convolution.
    std::vector<double> net{1.0};  // offset range [-k, +k] after k opponents
    for (int k = 0; k < n_opponents; ++k) {
        std::vector<double> next(net.size() + 2, 0.0);
        for (std::size_t i = 0; i < net.size(); ++i) {
            for (int d = 0; d < 3; ++d) {
                next[i + d] += net[i] * opponent_action_probs[d];
            }
        }
        net = std::move(next);
    }

    TransitionModel model;
    model.n_states = space.size();
    model.n_actions = kNumActions;
    model.t.assign(static_cast<std::size_t>(model.n_states) * model.n_actions * model.n_states,
                   0.0);
    for (int s = 0; s < model.n_states; ++s) {
        for (int a = 0; a < kNumActions; ++a) {
            const int own = a - 1;
            for (std::size_t i = 0; i < net.size(); ++i) {
                const int opp = static_cast<int>(i) - n_opponents;
                const long long raw = static_cast<long long>(s) + own + opp;
                const int s2 = space.clamp_offset(raw - space.initial_index());
                model.at(s, a, s2) += net[i];
            }
        }
    }
    return model;
}

ObservationModel price_signal_observation_model(const StateSpace& space,
                                                double reliability) {
    if (!(reliability >= 0.0 && reliability <= 1.0)) {
        throw std::invalid_argument("reliability must lie in [0,1]");
    }
    ObservationModel model;
    model.n_states = space.size();
    model.n_signals = kNumSignals;
    model.n_obs = space.size() * kNumSignals;
    model.w.assign(static_cast<std::size_t>(model.n_states) * model.n_signals * model.n_obs,
                   0.0);
    for (int s2 = 0; s2 < model.n_states; ++s2) {
        for (int i = 0; i < kNumSignals; ++i) {
            const InfoSignal truth = signal_from_index(i);
            for (int sig = 0; sig < kNumSignals; ++sig) {
                const InfoSignal seen = signal_from_index(sig);
                double p = 0.0;
                if (truth == InfoSignal::none) {
                    p = seen == InfoSignal::none ? 1.0 : 0.0;
                } else if (seen == truth) {
                    p = reliability;
                } else if (seen == InfoSignal::none) {
                    p = 1.0 - reliability;
                }
                if (p != 0.0) {
                    model.at(s2, i, s2 * kNumSignals + sig) = p;
                }
            }
        }
    }
    return model;
}

int observation_index(const StateSpace& space, int price_state_index, InfoSignal signal) {
    if (price_state_index < 0 || price_state_index >= space.size()) {
        throw std::invalid_argument("price state index out of range");
    }
    return price_state_index * kNumSignals + signal_index(signal);
}

std::array<double, 3> signal_prior(const InfoModel& model, double outcome_prob) {
    model.validate();
    if (!(outcome_prob >= 0.0 && outcome_prob <= 1.0)) {
        throw std::invalid_argument("outcome_prob must lie in [0,1]");
    }
    const double arrival = 1.0 - std::exp(-model.rate);
    const double p_pos = outcome_prob * model.positive_prob +
                         (1.0 - outcome_prob) * (1.0 - model.positive_prob);
    return {arrival * (1.0 - p_pos), 1.0 - arrival, arrival * p_pos};
}

}  // namespace pm
