#ifndef PMARKET_SIM_HPP
#define PMARKET_SIM_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pmarket/equilibrium.hpp"
#include "pmarket/posgi.hpp"
#include "pmarket/strategies.hpp"

namespace pm {

/// Full description of one simulated market. Defaults follow the reference
/// two-agent setup: 50 trading days, one-unit trades, event outcome 1.
struct MarketConfig {
    int horizon = 50;
    int n_agents = 2;
    double liquidity = 100.0;
    int max_trade = 1;  // per-period unit cap; the action alphabet enforces 1
    std::vector<double> initial_q = {0.0, 0.0};
    std::size_t traded = 1;  // security paying $1 when the event occurs
    InfoModel info;
    std::vector<StrategyKind> strategies = {StrategyKind::ce, StrategyKind::ce};
    std::vector<double> thetas = {0.0, 0.0};
    int outcome = 1;  // realized security index; 1 = the event occurs
    std::uint64_t seed = 1;
    int max_units = 0;          // 0 -> 2*horizon
    double signal_shift = 0.05; // private estimate nudge per information signal
    double inventory_floor = -std::numeric_limits<double>::infinity();
    StrategyConfig strategy_config;
    NegativeRewardRule negative_reward_rule = NegativeRewardRule::principal_complex;
    bool verify_equilibria = true;
    bool opponent_frequency_model = false;  // belief filter opponent model
    double day_seconds = 0.0;               // demo pacing; no effect on results

    int effective_max_units() const { return max_units > 0 ? max_units : 2 * horizon; }
    void validate() const;
};

/// Everything observable from one run. Prices and quantities are recorded
/// after each period's joint trade; settlement is folded into the final
/// period's reward before the CRRA mapping.
struct RunResult {
    std::vector<double> prices;
    std::vector<double> traded_quantity;
    std::vector<std::vector<TradeAction>> actions;  // [agent][period]
    std::vector<std::vector<double>> rewards;       // [agent][period], currency
    std::vector<std::vector<double>> utils;         // [agent][period], utils
    std::vector<double> cumulative_utility;         // per agent
    std::vector<double> settlement;                 // per agent
    std::vector<double> final_holdings;             // traded-security shares per agent
    std::vector<double> agent_cash;                 // final cash incl. settlement
    double market_maker_cash = 0.0;                 // final cash incl. settlement

    int truncation_events = 0;
    int inventory_coercions = 0;
    int belief_fallback_events = 0;
    int ce_fallback_events = 0;
    long ce_checks = 0;
    long ce_failures = 0;

    bool operator==(const RunResult&) const = default;
};

/// Runs the full observe -> update belief -> decide -> trade -> reward loop
/// for config.horizon periods. Deterministic given the config (seed included).
RunResult run_market(const MarketConfig& config);

struct Pairing {
    StrategyKind a;
    StrategyKind b;
};

struct StrategyRow {
    std::string strategy;
    double mean_utility = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double fce_percent = 0.0;
    double final_price_error = 0.0;
    // standard errors over runs, for significance tests; not serialized
    double utility_stderr = 0.0;
    double fce_stderr = 0.0;
    double price_error_stderr = 0.0;
};

struct ExperimentSummary {
    std::vector<StrategyRow> rows;
    int n_runs = 0;
    std::uint64_t base_seed = 0;
    long total_ce_checks = 0;
    long total_ce_failures = 0;
    int total_belief_fallbacks = 0;
    int total_ce_fallbacks = 0;
};

/// Batch comparison harness. Each pairing is run on n_runs seeded worlds; a
/// CE-vs-CE reference is run on the same seeds and the per-period agreement
/// of each non-CE agent with its CE counterpart gives the fce column.
/// Confidence intervals are 95% normal approximations over runs.
ExperimentSummary run_experiment(const MarketConfig& base,
                                 const std::vector<Pairing>& pairings, int n_runs,
                                 std::vector<std::uint64_t> seeds = {});

/// Writes prices.csv, agents.csv and manifest.json under dir.
void export_run(const RunResult& result, const MarketConfig& config,
                const std::string& dir);

/// Writes summary.csv and manifest.json under dir.
void export_summary(const ExperimentSummary& summary, const MarketConfig& base,
                    const std::string& dir);

std::string config_to_json_text(const MarketConfig& config);
MarketConfig config_from_json_text(const std::string& text);

}  // namespace pm

#endif  // PMARKET_SIM_HPP
