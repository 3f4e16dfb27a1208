#include "pmarket/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pmarket/lmsr.hpp"

namespace pm {

namespace {

constexpr double kMarginFloor = 1e-4;
constexpr double kMarginCap = 1.0;

// Shared band logic for the margin traders: buy when the posted price is
// below the buy limit, sell when above the sell limit.
TradeAction margin_band_action(double posted, double estimate, double margin) {
    if (posted < estimate * (1.0 - margin)) return TradeAction::buy;
    if (posted > estimate * (1.0 + margin)) return TradeAction::sell;
    return TradeAction::hold;
}

class ZiStrategy final : public Strategy {
public:
    StrategyKind kind() const override { return StrategyKind::zi; }
    TradeAction decide(const MarketView&, std::mt19937_64& rng) override {
        std::uniform_int_distribution<int> pick(-1, 1);
        return trade_action_from_int(pick(rng));
    }
};

// Posted-price retargeting of the classic profit-margin trader: margin grows
// multiplicatively after a trade whose realized utility was positive and
// shrinks otherwise, so an idle or losing trader relaxes until the posted
// price becomes acceptable.
class ZipStrategy final : public Strategy {
public:
    explicit ZipStrategy(const StrategyConfig& cfg)
        : beta_(cfg.zip_beta), margin_(cfg.margin_init) {}

    StrategyKind kind() const override { return StrategyKind::zip; }

    TradeAction decide(const MarketView& view, std::mt19937_64&) override {
        if (view.period > 0) {
            if (view.last_action != TradeAction::hold && view.last_utility > 0.0) {
                margin_ = std::min(margin_ * (1.0 + beta_), kMarginCap);
            } else {
                margin_ = std::max(margin_ * (1.0 - beta_), kMarginFloor);
            }
        }
        return margin_band_action(view.posted_price, view.estimate, margin_);
    }

private:
    double beta_;
    double margin_;
};

// Margin chases the most recent posted-price move, keeping the trader just
// competitive with the price trajectory.
class CpStrategy final : public Strategy {
public:
    explicit CpStrategy(const StrategyConfig& cfg)
        : beta_(cfg.cp_beta), margin_(cfg.margin_init) {}

    StrategyKind kind() const override { return StrategyKind::cp; }

    TradeAction decide(const MarketView& view, std::mt19937_64&) override {
        if (have_prev_) {
            const double target =
                std::abs(view.posted_price - prev_price_) / std::max(view.estimate, 1e-6);
            margin_ += beta_ * (target - margin_);
            margin_ = std::clamp(margin_, kMarginFloor, kMarginCap);
        }
        prev_price_ = view.posted_price;
        have_prev_ = true;
        return margin_band_action(view.posted_price, view.estimate, margin_);
    }

private:
    double beta_;
    double margin_;
    double prev_price_ = 0.0;
    bool have_prev_ = false;
};

// Frequency trader: weighs the utility of trading at the current posted
// price by how often past posted prices made that side profitable.
class GdStrategy final : public Strategy {
public:
    explicit GdStrategy(const StrategyConfig& cfg) : window_(cfg.gd_window) {}

    StrategyKind kind() const override { return StrategyKind::gd; }

    TradeAction decide(const MarketView& view, std::mt19937_64&) override {
        TradeAction action = TradeAction::hold;
        if (!history_.empty()) {
            std::size_t begin = 0;
            if (window_ > 0 && history_.size() > static_cast<std::size_t>(window_)) {
                begin = history_.size() - static_cast<std::size_t>(window_);
            }
            int below = 0;
            int above = 0;
            for (std::size_t i = begin; i < history_.size(); ++i) {
                if (history_[i] < view.estimate) ++below;
                if (history_[i] > view.estimate) ++above;
            }
            const double n = static_cast<double>(history_.size() - begin);
            const double e_buy =
                (below / n) *
                crra(view.estimate - view.posted_price, view.theta, view.negative_rule);
            const double e_sell =
                (above / n) *
                crra(view.posted_price - view.estimate, view.theta, view.negative_rule);
            if (e_buy > 0.0 && e_buy > e_sell) {
                action = TradeAction::buy;
            } else if (e_sell > 0.0 && e_sell > e_buy) {
                action = TradeAction::sell;
            }
        }
        history_.push_back(view.posted_price);
        return action;
    }

private:
    int window_;
    std::vector<double> history_;
};

// Exact finite-horizon plan over the agent's own future unit trades, with
// the outcome estimate snapped to a fixed probability grid. The plan prices
// trades with the LMSR and assumes the posted price drifts one unit per
// period toward the estimate (other informed traders act on the same news)
// until it gets there, so postponing a good trade genuinely costs value.
class DpStrategy final : public Strategy {
public:
    explicit DpStrategy(const StrategyConfig& cfg) : grid_(cfg.dp_grid) {
        if (grid_ < 2) throw std::invalid_argument("DP grid needs at least 2 points");
    }

    StrategyKind kind() const override { return StrategyKind::dp; }

    TradeAction decide(const MarketView& view, std::mt19937_64&) override {
        if (!view.quantities) {
            throw std::invalid_argument("DP strategy needs market quantities in the view");
        }
        const double snapped = std::clamp(
            std::round(view.estimate * (grid_ - 1)) / static_cast<double>(grid_ - 1),
            1e-6, 1.0 - 1e-6);
        const int remaining = view.horizon - view.period;
        if (remaining < 1) return TradeAction::hold;

        const Liquidity b(view.liquidity);
        // Units of drift until the posted price would reach the estimate.
        const double posted = std::clamp(view.posted_price, 1e-6, 1.0 - 1e-6);
        const double gap = view.liquidity * (std::log(snapped / (1.0 - snapped)) -
                                             std::log(posted / (1.0 - posted)));
        const int drift_dir = gap > 0.5 ? 1 : (gap < -0.5 ? -1 : 0);
        const int drift_cap = static_cast<int>(std::llround(std::abs(gap)));

        const int span = remaining;
        const int width = 2 * span + 1;
        auto reward = [&](int step, int own_offset, TradeAction a) {
            const int drift = drift_dir * std::min(step, drift_cap);
            const QuantityVector q = view.quantities->shifted(
                view.traded, static_cast<double>(drift + own_offset));
            double r = 0.0;
            if (a == TradeAction::buy) {
                r = snapped - buy_payment(q, view.traded, 1.0, b);
            } else if (a == TradeAction::sell) {
                r = sell_payout(q, view.traded, 1.0, b) - snapped;
            }
            return crra(r, view.theta, view.negative_rule);
        };

        // value[d + span] = optimal utility from step k onward with own net
        // position offset d; backward induction from the horizon.
        std::vector<double> value(static_cast<std::size_t>(width), 0.0);
        std::vector<double> next(static_cast<std::size_t>(width), 0.0);
        for (int k = remaining - 1; k >= 1; --k) {
            for (int d = -k; d <= k; ++d) {
                double best = reward(k, d, TradeAction::hold) + value[d + span];
                best = std::max(best, reward(k, d, TradeAction::sell) + value[d - 1 + span]);
                best = std::max(best, reward(k, d, TradeAction::buy) + value[d + 1 + span]);
                next[d + span] = best;
            }
            std::swap(value, next);
        }

        const double v_hold = reward(0, 0, TradeAction::hold) + value[span];
        const double v_sell = reward(0, 0, TradeAction::sell) + value[span - 1];
        const double v_buy = reward(0, 0, TradeAction::buy) + value[span + 1];
        const double best = std::max({v_hold, v_sell, v_buy});
        if (v_hold >= best - 1e-12) return TradeAction::hold;
        if (v_sell >= best - 1e-12 && v_sell >= v_buy) return TradeAction::sell;
        return TradeAction::buy;
    }

private:
    int grid_;
};

class CeStrategy final : public Strategy {
public:
    StrategyKind kind() const override { return StrategyKind::ce; }
    TradeAction decide(const MarketView& view, std::mt19937_64&) override {
        if (!view.recommendation) {
            throw std::invalid_argument("CE strategy needs the period's recommendation");
        }
        return *view.recommendation;
    }
};

}  // namespace

std::optional<StrategyKind> strategy_from_token(std::string_view token) {
    if (token == "zi") return StrategyKind::zi;
    if (token == "zip") return StrategyKind::zip;
    if (token == "cp") return StrategyKind::cp;
    if (token == "gd") return StrategyKind::gd;
    if (token == "dp") return StrategyKind::dp;
    if (token == "ce") return StrategyKind::ce;
    return std::nullopt;
}

std::string strategy_token(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::zi: return "zi";
        case StrategyKind::zip: return "zip";
        case StrategyKind::cp: return "cp";
        case StrategyKind::gd: return "gd";
        case StrategyKind::dp: return "dp";
        case StrategyKind::ce: return "ce";
    }
    throw std::invalid_argument("unknown strategy kind");
}

std::unique_ptr<Strategy> make_strategy(StrategyKind kind, const StrategyConfig& config) {
    switch (kind) {
        case StrategyKind::zi: return std::make_unique<ZiStrategy>();
        case StrategyKind::zip: return std::make_unique<ZipStrategy>(config);
        case StrategyKind::cp: return std::make_unique<CpStrategy>(config);
        case StrategyKind::gd: return std::make_unique<GdStrategy>(config);
        case StrategyKind::dp: return std::make_unique<DpStrategy>(config);
        case StrategyKind::ce: return std::make_unique<CeStrategy>();
    }
    throw std::invalid_argument("unknown strategy kind");
}

double agreement_rate(const std::vector<TradeAction>& a, const std::vector<TradeAction>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("agreement_rate needs equal-length action logs");
    }
    if (a.empty()) return 0.0;
    std::size_t same = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == b[i]) ++same;
    }
    return 100.0 * static_cast<double>(same) / static_cast<double>(a.size());
}

}  // namespace pm
