#include "pmarket/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "pmarket/belief.hpp"
#include "pmarket/lmsr.hpp"

namespace pm {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr double kEstimateFloor = 0.01;
constexpr double kEstimateCeil = 0.99;

// One joint profile drawn from the CE distribution with a generator that
// depends only on (run seed, period): the mediator's shared coin.
JointAction sample_joint_profile(const NormalFormGame& game, const std::vector<double>& p,
                                 std::uint64_t seed, int period) {
    std::mt19937_64 rng(mix_seed(seed, 0xCE11ULL * 1315423911ULL + static_cast<std::uint64_t>(period)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = unit(rng);
    double acc = 0.0;
    int chosen = game.profile_count() - 1;
    for (int phi = 0; phi < game.profile_count(); ++phi) {
        acc += std::max(p[phi], 0.0);
        if (u < acc) {
            chosen = phi;
            break;
        }
    }
    const std::vector<int> actions = game.profile_actions(chosen);
    JointAction joint;
    joint.reserve(actions.size());
    for (int a : actions) joint.push_back(action_from_index(a));
    return joint;
}

// Per-agent trade cash flows under ordering-symmetrized LMSR pricing: every
// permutation of the agents executes the joint action sequentially and each
// agent's payment is averaged across permutations. Summed over agents this
// telescopes to C(q_after) - C(q_before) for any permutation, so the
// market maker's take is path independent.
std::vector<double> execute_joint_trade(const QuantityVector& q, std::size_t traded,
                                        Liquidity b, const std::vector<TradeAction>& actions) {
    const int n = static_cast<int>(actions.size());
    std::vector<double> cash(static_cast<std::size_t>(n), 0.0);
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    int orderings = 0;
    do {
        QuantityVector cur = q;
        for (int agent : order) {
            if (actions[agent] == TradeAction::buy) {
                cash[agent] -= buy_payment(cur, traded, 1.0, b);
                cur.add(traded, 1.0);
            } else if (actions[agent] == TradeAction::sell) {
                cash[agent] += sell_payout(cur, traded, 1.0, b);
                cur.add(traded, -1.0);
            }
        }
        ++orderings;
    } while (std::next_permutation(order.begin(), order.end()));
    for (double& c : cash) c /= orderings;
    return cash;
}

}  // namespace

void MarketConfig::validate() const {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (n_agents < 2) throw std::invalid_argument("need at least 2 agents");
    if (n_agents > 6) throw std::invalid_argument("ordering symmetrization caps agents at 6");
    if (!(liquidity > 0.0) || !std::isfinite(liquidity)) {
        throw std::invalid_argument("liquidity must be positive");
    }
    if (max_trade < 1) throw std::invalid_argument("max_trade must be >= 1");
    if (initial_q.size() < 2) throw std::invalid_argument("need at least 2 securities");
    if (traded >= initial_q.size()) throw std::invalid_argument("traded index out of range");
    info.validate();
    if (static_cast<int>(strategies.size()) != n_agents) {
        throw std::invalid_argument("need one strategy per agent");
    }
    if (static_cast<int>(thetas.size()) != n_agents) {
        throw std::invalid_argument("need one theta per agent");
    }
    for (double t : thetas) {
        if (!(t > -1.0 && t < 1.0)) throw std::invalid_argument("theta must lie in (-1,1)");
    }
    if (outcome < 0 || static_cast<std::size_t>(outcome) >= initial_q.size()) {
        throw std::invalid_argument("outcome must index a security");
    }
    if (max_units < 0) throw std::invalid_argument("max_units must be >= 0");
    if (!(signal_shift >= 0.0 && signal_shift < 0.5)) {
        throw std::invalid_argument("signal_shift must lie in [0, 0.5)");
    }
    if (day_seconds < 0.0) throw std::invalid_argument("day_seconds must be >= 0");
}

RunResult run_market(const MarketConfig& config) {
    config.validate();
    const int n = config.n_agents;
    const int horizon = config.horizon;
    const Liquidity b(config.liquidity);
    const StateSpace space(QuantityVector(config.initial_q), config.traded,
                           config.effective_max_units(), horizon);
    const ObservationModel omega =
        price_signal_observation_model(space, config.info.reliability);
    const std::array<double, 3> prior3 = signal_prior(config.info);
    const std::vector<double> sig_prior(prior3.begin(), prior3.end());

    // One shared transition model per agent under the uniform opponent model;
    // per-agent empirical models replace it when frequency tracking is on.
    const TransitionModel uniform_t =
        single_agent_transition(space, n - 1, uniform_action_probs());
    std::vector<TransitionModel> agent_t(static_cast<std::size_t>(n), uniform_t);
    std::vector<std::array<long, 3>> opponent_counts(
        static_cast<std::size_t>(n), {1, 1, 1});  // add-one smoothing

    std::mt19937_64 world_rng(mix_seed(config.seed, 0x5EEDULL));
    std::vector<std::mt19937_64> agent_rng;
    agent_rng.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        agent_rng.emplace_back(mix_seed(config.seed, 0xA6E57ULL + static_cast<std::uint64_t>(i)));
    }

    std::vector<std::unique_ptr<Strategy>> agents;
    agents.reserve(static_cast<std::size_t>(n));
    for (StrategyKind kind : config.strategies) {
        agents.push_back(make_strategy(kind, config.strategy_config));
    }
    const bool any_ce =
        std::any_of(config.strategies.begin(), config.strategies.end(),
                    [](StrategyKind k) { return k == StrategyKind::ce; });
    const bool risk_averse_population =
        std::any_of(config.thetas.begin(), config.thetas.end(),
                    [](double t) { return t > 0.0; });

    RunResult result;
    result.prices.reserve(static_cast<std::size_t>(horizon));
    result.traded_quantity.reserve(static_cast<std::size_t>(horizon));
    result.actions.assign(static_cast<std::size_t>(n), {});
    result.rewards.assign(static_cast<std::size_t>(n), {});
    result.utils.assign(static_cast<std::size_t>(n), {});

    std::vector<BeliefState> beliefs(static_cast<std::size_t>(n),
                                     uniform_prior(space.size()));
    std::vector<InfoSignal> latest_signal(static_cast<std::size_t>(n), InfoSignal::none);
    std::vector<TradeAction> prev_action(static_cast<std::size_t>(n), TradeAction::hold);
    std::vector<double> last_reward(static_cast<std::size_t>(n), 0.0);
    std::vector<double> last_utility(static_cast<std::size_t>(n), 0.0);
    std::vector<double> holdings(static_cast<std::size_t>(n), 0.0);
    std::vector<double> cash(static_cast<std::size_t>(n), 0.0);
    double mm_cash = 0.0;

    MarketState state{QuantityVector(config.initial_q), 0};

    for (int h = 0; h < horizon; ++h) {
        if (config.day_seconds > 0.0) {
            std::this_thread::sleep_for(
                std::chrono::duration<double>(config.day_seconds));
        }

        const std::vector<InfoSignal> signals =
            sample_signals(world_rng, config.info, config.outcome, n);
        const double posted = price(state.q, b)[config.traded];
        const int state_idx = space.index_of_quantity(state.q[config.traded]);
        if (state_idx < 0) throw std::logic_error("market left the state grid");

        // Belief updates and signal-adjusted outcome estimates.
        std::vector<double> estimates(static_cast<std::size_t>(n), 0.5);
        for (int i = 0; i < n; ++i) {
            if (config.opponent_frequency_model) {
                std::array<double, 3> probs{};
                const auto& c = opponent_counts[i];
                const double total = static_cast<double>(c[0] + c[1] + c[2]);
                for (int a = 0; a < 3; ++a) probs[a] = static_cast<double>(c[a]) / total;
                agent_t[i] = single_agent_transition(space, n - 1, probs);
            }
            bool degenerate = false;
            beliefs[i] = update_belief(beliefs[i], action_index(prev_action[i]),
                                       observation_index(space, state_idx, signals[i]),
                                       agent_t[i], omega, sig_prior, &degenerate);
            if (degenerate) ++result.belief_fallback_events;
            if (signals[i] != InfoSignal::none) latest_signal[i] = signals[i];
            const double base = outcome_belief(beliefs[i], b, space);
            estimates[i] = std::clamp(
                base + config.signal_shift * to_int(latest_signal[i]),
                kEstimateFloor, kEstimateCeil);
        }

        // CE machinery: one shared distribution per period, one joint draw.
        std::vector<TradeAction> recommendation;
        if (any_ce) {
            const NormalFormGame game =
                build_stage_game(state, config.traded, b, estimates, config.thetas,
                                 config.negative_reward_rule);
            CorrelatedEquilibrium dist;
            if (risk_averse_population) {
                if (auto pareto = pareto_ce(game)) {
                    dist = *pareto;
                } else {
                    ++result.ce_fallback_events;
                    dist = solve_ce(game, CeObjective::utilitarian);
                }
            } else {
                dist = solve_ce(game, CeObjective::utilitarian);
            }
            if (config.verify_equilibria) {
                ++result.ce_checks;
                if (!dual_feasibility_test(game).exists_ce || !is_ce(game, dist.p, 1e-9)) {
                    ++result.ce_failures;
                }
            }
            recommendation = sample_joint_profile(game, dist.p, config.seed, h);
        }

        // Simultaneous decisions.
        std::vector<TradeAction> actions(static_cast<std::size_t>(n), TradeAction::hold);
        for (int i = 0; i < n; ++i) {
            MarketView view;
            view.posted_price = posted;
            view.signal = signals[i];
            view.estimate = estimates[i];
            view.last_reward = last_reward[i];
            view.last_utility = last_utility[i];
            view.last_action = prev_action[i];
            view.period = h;
            view.horizon = horizon;
            view.liquidity = config.liquidity;
            view.quantities = &state.q;
            view.traded = config.traded;
            view.theta = config.thetas[i];
            view.negative_rule = config.negative_reward_rule;
            if (!recommendation.empty()) view.recommendation = recommendation[i];
            actions[i] = agents[i]->decide(view, agent_rng[i]);
        }

        // Inventory floor: a sell that would breach the floor becomes a hold.
        for (int i = 0; i < n; ++i) {
            if (actions[i] == TradeAction::sell &&
                holdings[i] - 1.0 < config.inventory_floor) {
                actions[i] = TradeAction::hold;
                ++result.inventory_coercions;
            }
        }

        // State-bound coercion: trades that would leave the enumerated grid
        // are cancelled (highest agent index first) and logged as truncations.
        auto net_of = [&actions]() {
            int net = 0;
            for (TradeAction a : actions) net += to_int(a);
            return net;
        };
        while (true) {
            const long long raw = static_cast<long long>(state_idx) + net_of();
            if (raw >= 0 && raw < space.size()) break;
            const int dir = raw < 0 ? -1 : +1;
            for (int i = n - 1; i >= 0; --i) {
                if (to_int(actions[i]) == dir) {
                    actions[i] = TradeAction::hold;
                    ++result.truncation_events;
                    break;
                }
            }
        }

        // Atomic joint trade with symmetrized pricing.
        const std::vector<double> trade_cash =
            execute_joint_trade(state.q, config.traded, b, actions);
        double mm_delta = 0.0;
        for (int i = 0; i < n; ++i) {
            cash[i] += trade_cash[i];
            mm_delta -= trade_cash[i];
            holdings[i] += to_int(actions[i]);
        }
        mm_cash += mm_delta;

        // Apply the joint move; the final period has no successor state, so
        // the quantity update happens in place.
        const int net = net_of();
        if (h < horizon - 1) {
            bool truncated = false;
            state = transition(state, actions, space, &truncated);
            if (truncated) ++result.truncation_events;
        } else {
            state.q.add(config.traded, static_cast<double>(net));
        }

        result.prices.push_back(price(state.q, b)[config.traded]);
        result.traded_quantity.push_back(state.q[config.traded]);

        for (int i = 0; i < n; ++i) {
            double reward = trade_cash[i];
            if (h == horizon - 1) {
                // Settlement: the realized security pays $1 per share held.
                std::vector<std::vector<double>> position(
                    1, std::vector<double>(config.initial_q.size(), 0.0));
                position[0][config.traded] = holdings[i];
                const double payout = settle(position, static_cast<std::size_t>(config.outcome))[0];
                result.settlement.push_back(payout);
                reward += payout;
                cash[i] += payout;
                mm_cash -= payout;
            }
            const double u = crra(reward, config.thetas[i], config.negative_reward_rule);
            result.actions[i].push_back(actions[i]);
            result.rewards[i].push_back(reward);
            result.utils[i].push_back(u);
            last_reward[i] = reward;
            last_utility[i] = u;
            prev_action[i] = actions[i];
        }
        if (config.opponent_frequency_model) {
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    if (j != i) ++opponent_counts[i][action_index(actions[j])];
                }
            }
        }
    }

    result.cumulative_utility.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (double u : result.utils[i]) result.cumulative_utility[i] += u;
    }
    result.final_holdings = holdings;
    result.agent_cash = cash;
    result.market_maker_cash = mm_cash;
    return result;
}

namespace {

struct RunningStats {
    std::vector<double> samples;
    void add(double x) { samples.push_back(x); }
    double mean() const {
        double m = 0.0;
        for (double x : samples) m += x;
        return samples.empty() ? 0.0 : m / static_cast<double>(samples.size());
    }
    double stderr_mean() const {
        if (samples.size() < 2) return 0.0;
        const double m = mean();
        double ss = 0.0;
        for (double x : samples) ss += (x - m) * (x - m);
        const double var = ss / static_cast<double>(samples.size() - 1);
        return std::sqrt(var / static_cast<double>(samples.size()));
    }
};

}  // namespace

ExperimentSummary run_experiment(const MarketConfig& base,
                                 const std::vector<Pairing>& pairings, int n_runs,
                                 std::vector<std::uint64_t> seeds) {
    if (pairings.empty()) throw std::invalid_argument("run_experiment needs pairings");
    if (n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");
    if (base.n_agents != 2) {
        throw std::invalid_argument("pairing experiments are defined for 2 agents");
    }
    if (seeds.empty()) {
        seeds.resize(static_cast<std::size_t>(n_runs));
        for (int k = 0; k < n_runs; ++k) seeds[k] = base.seed + static_cast<std::uint64_t>(k);
    }
    if (static_cast<int>(seeds.size()) < n_runs) {
        throw std::invalid_argument("need at least n_runs seeds");
    }

    MarketConfig ce_config = base;
    ce_config.strategies = {StrategyKind::ce, StrategyKind::ce};
    ce_config.validate();

    ExperimentSummary summary;
    summary.n_runs = n_runs;
    summary.base_seed = base.seed;

    auto absorb_counters = [&summary](const RunResult& r) {
        summary.total_ce_checks += r.ce_checks;
        summary.total_ce_failures += r.ce_failures;
        summary.total_belief_fallbacks += r.belief_fallback_events;
        summary.total_ce_fallbacks += r.ce_fallback_events;
    };

    std::vector<RunResult> ce_reference;
    ce_reference.reserve(static_cast<std::size_t>(n_runs));
    for (int k = 0; k < n_runs; ++k) {
        MarketConfig c = ce_config;
        c.seed = seeds[static_cast<std::size_t>(k)];
        ce_reference.push_back(run_market(c));
        absorb_counters(ce_reference.back());
    }

    for (const Pairing& pairing : pairings) {
        MarketConfig cfg = base;
        cfg.strategies = {pairing.a, pairing.b};
        cfg.validate();
        const bool pure_ce =
            pairing.a == StrategyKind::ce && pairing.b == StrategyKind::ce;

        RunningStats utility;
        RunningStats fce;
        RunningStats price_error;
        for (int k = 0; k < n_runs; ++k) {
            MarketConfig run_cfg = cfg;
            run_cfg.seed = seeds[static_cast<std::size_t>(k)];
            const RunResult& ref = ce_reference[static_cast<std::size_t>(k)];
            RunResult fresh;
            if (!pure_ce) {
                fresh = run_market(run_cfg);
                absorb_counters(fresh);
            }
            const RunResult& r = pure_ce ? ref : fresh;

            double mean_util = 0.0;
            for (int i = 0; i < 2; ++i) mean_util += r.cumulative_utility[i];
            utility.add(mean_util / 2.0);

            price_error.add(std::abs(r.prices.back() - static_cast<double>(base.outcome)));

            // Agreement with the CE recommendation stream: baseline agents
            // against their CE counterparts on the same seeded world.
            double agree = 0.0;
            int counted = 0;
            const StrategyKind kinds[2] = {pairing.a, pairing.b};
            for (int i = 0; i < 2; ++i) {
                if (!pure_ce && kinds[i] == StrategyKind::ce) continue;
                agree += agreement_rate(r.actions[i], ref.actions[i]);
                ++counted;
            }
            fce.add(counted > 0 ? agree / counted : 100.0);
        }

        StrategyRow row;
        row.strategy = pairing.a == pairing.b
                           ? strategy_token(pairing.a)
                           : strategy_token(pairing.a) + "+" + strategy_token(pairing.b);
        row.mean_utility = utility.mean();
        row.utility_stderr = utility.stderr_mean();
        const double half = 1.959963984540054 * row.utility_stderr;
        row.ci_low = row.mean_utility - half;
        row.ci_high = row.mean_utility + half;
        row.fce_percent = fce.mean();
        row.fce_stderr = fce.stderr_mean();
        row.final_price_error = price_error.mean();
        row.price_error_stderr = price_error.stderr_mean();
        summary.rows.push_back(std::move(row));
    }
    return summary;
}

}  // namespace pm
