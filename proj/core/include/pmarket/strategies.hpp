#ifndef PMARKET_STRATEGIES_HPP
#define PMARKET_STRATEGIES_HPP

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "pmarket/posgi.hpp"
#include "pmarket/risk.hpp"

namespace pm {

enum class StrategyKind { zi, zip, cp, gd, dp, ce };

std::optional<StrategyKind> strategy_from_token(std::string_view token);
std::string strategy_token(StrategyKind kind);

struct StrategyConfig {
    double zip_beta = 0.1;      // ZIP margin learning rate
    double margin_init = 0.05;  // initial profit margin for ZIP and CP
    double cp_beta = 0.1;       // CP margin learning rate
    int dp_grid = 51;           // belief grid resolution for DP
    int gd_window = 0;          // GD price-history window; 0 = full run
};

/// Everything a strategy may look at in one period. Strategies receive the
/// same information feed; they differ only in how they turn it into a trade.
struct MarketView {
    double posted_price = 0.5;
    InfoSignal signal = InfoSignal::none;
    double estimate = 0.5;     // signal-adjusted outcome probability
    double last_reward = 0.0;  // previous period's monetary reward
    double last_utility = 0.0; // previous period's reward in utils
    TradeAction last_action = TradeAction::hold;
    int period = 0;
    int horizon = 1;
    double liquidity = 100.0;
    const QuantityVector* quantities = nullptr;
    std::size_t traded = 1;
    double theta = 0.0;
    NegativeRewardRule negative_rule = NegativeRewardRule::principal_complex;
    std::optional<TradeAction> recommendation;  // the agent's CE component
};

class Strategy {
public:
    virtual ~Strategy() = default;
    virtual StrategyKind kind() const = 0;
    virtual TradeAction decide(const MarketView& view, std::mt19937_64& rng) = 0;
};

std::unique_ptr<Strategy> make_strategy(StrategyKind kind, const StrategyConfig& config = {});

/// Percentage of periods in which two equal-length action logs coincide.
double agreement_rate(const std::vector<TradeAction>& a, const std::vector<TradeAction>& b);

}  // namespace pm

#endif  // PMARKET_STRATEGIES_HPP
