#include "pmarket/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pm {

namespace {

constexpr double kCeTol = 1e-9;

// Per-player shift anchored at profile 0. The incentive rows are built from
// utility differences, so the shift leaves the polytope unchanged while
// making solve_ce insensitive to per-player payoff translations.
NormalFormGame canonicalized(const NormalFormGame& game) {
    NormalFormGame out = game;
    for (int i = 0; i < game.n_players; ++i) {
        const double anchor = game.utility(0, i);
        for (auto& row : out.utilities) row[i] -= anchor;
    }
    return out;
}

std::vector<double> welfare_objective(const NormalFormGame& game) {
    std::vector<double> w(static_cast<std::size_t>(game.profile_count()), 0.0);
    for (int phi = 0; phi < game.profile_count(); ++phi) {
        for (int i = 0; i < game.n_players; ++i) w[phi] += game.utility(phi, i);
    }
    return w;
}

LinearProgram ce_lp(const NormalFormGame& game) {
    LinearProgram lp;
    const int n = game.profile_count();
    lp.objective.assign(static_cast<std::size_t>(n), 0.0);
    for (const IncentiveRow& row : incentive_rows(game)) {
        lp.rows.push_back(row.coeffs);
        lp.relations.push_back(Relation::ge);
        lp.rhs.push_back(0.0);
    }
    lp.rows.emplace_back(static_cast<std::size_t>(n), 1.0);
    lp.relations.push_back(Relation::eq);
    lp.rhs.push_back(1.0);
    return lp;
}

CorrelatedEquilibrium solve_ce_lp(LinearProgram lp, const NormalFormGame& game,
                                  CeObjective objective) {
    if (objective == CeObjective::utilitarian) {
        lp.objective = welfare_objective(game);
        lp.sense = Sense::maximize;
    }
    const LpVerdict verdict = solve_lp(lp);
    if (verdict.status == LpStatus::infeasible) {
        throw std::runtime_error(
            "correlated-equilibrium LP infeasible; a stage game violated the "
            "guaranteed-existence contract");
    }
    if (verdict.status == LpStatus::unbounded) {
        throw std::logic_error("CE polytope cannot be unbounded");
    }
    return CorrelatedEquilibrium{verdict.solution};
}

}  // namespace

NormalFormGame build_stage_game(const MarketState& s, std::size_t traded_security,
                                Liquidity b, const std::vector<double>& estimates,
                                const std::vector<double>& thetas,
                                NegativeRewardRule rule) {
    const int n = static_cast<int>(estimates.size());
    if (n < 1 || thetas.size() != estimates.size()) {
        throw std::invalid_argument("need one estimate and one theta per agent");
    }
    if (n > 6) {
        throw std::invalid_argument("ordering symmetrization supports at most 6 agents");
    }
    for (double e : estimates) {
        if (!(e > 0.0 && e < 1.0)) {
            throw std::invalid_argument("outcome estimates must lie in (0,1)");
        }
    }
    for (double t : thetas) {
        if (!(t > -1.0 && t < 1.0)) {
            throw std::invalid_argument("risk factors must lie in (-1,1)");
        }
    }

    NormalFormGame game;
    game.n_players = n;
    game.n_actions.assign(static_cast<std::size_t>(n), kNumActions);
    game.action_names.assign(static_cast<std::size_t>(n), {"sell", "hold", "buy"});
    game.utilities.assign(static_cast<std::size_t>(game.profile_count()),
                          std::vector<double>(static_cast<std::size_t>(n), 0.0));

    std::vector<int> order(static_cast<std::size_t>(n));
    for (int phi = 0; phi < game.profile_count(); ++phi) {
        const std::vector<int> actions = game.profile_actions(phi);
        std::vector<double> reward(static_cast<std::size_t>(n), 0.0);
        std::iota(order.begin(), order.end(), 0);
        int orderings = 0;
        do {
            QuantityVector q = s.q;
            for (int agent : order) {
                const TradeAction a = action_from_index(actions[agent]);
                if (a == TradeAction::buy) {
                    reward[agent] += estimates[agent] - buy_payment(q, traded_security, 1.0, b);
                    q.add(traded_security, 1.0);
                } else if (a == TradeAction::sell) {
                    reward[agent] += sell_payout(q, traded_security, 1.0, b) - estimates[agent];
                    q.add(traded_security, -1.0);
                }
            }
            ++orderings;
        } while (std::next_permutation(order.begin(), order.end()));

        for (int agent = 0; agent < n; ++agent) {
            game.utilities[phi][agent] =
                crra(reward[agent] / orderings, thetas[agent], rule);
        }
    }
    return game;
}

std::vector<IncentiveRow> incentive_rows(const NormalFormGame& game) {
    game.validate();
    std::vector<IncentiveRow> rows;
    const int n_profiles = game.profile_count();
    for (int i = 0; i < game.n_players; ++i) {
        for (int rec = 0; rec < game.n_actions[i]; ++rec) {
            for (int dev = 0; dev < game.n_actions[i]; ++dev) {
                if (dev == rec) continue;
                IncentiveRow row{i, rec, dev,
                                 std::vector<double>(static_cast<std::size_t>(n_profiles), 0.0)};
                for (int phi = 0; phi < n_profiles; ++phi) {
                    if (game.profile_actions(phi)[i] != rec) continue;
                    row.coeffs[phi] =
                        game.utility(phi, i) - game.utility(game.deviate(phi, i, dev), i);
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

LinearProgram ce_constraints(const NormalFormGame& game) {
    return ce_lp(game);
}

CorrelatedEquilibrium solve_ce(const NormalFormGame& game, CeObjective objective) {
    const NormalFormGame canonical = canonicalized(game);
    return solve_ce_lp(ce_lp(canonical), canonical, objective);
}

DualFeasibility dual_feasibility_test(const NormalFormGame& game) {
    const std::vector<IncentiveRow> rows = incentive_rows(game);
    const int n_profiles = game.profile_count();

    LinearProgram dual;
    dual.objective.assign(rows.size(), 0.0);
    for (int phi = 0; phi < n_profiles; ++phi) {
        std::vector<double> column(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) column[r] = rows[r].coeffs[phi];
        dual.rows.push_back(std::move(column));
        dual.relations.push_back(Relation::le);
        dual.rhs.push_back(-1.0);
    }
    const LpVerdict verdict = solve_lp(dual);
    return DualFeasibility{verdict.status == LpStatus::infeasible};
}

CeCalcResult ce_calc(int horizon,
                     const std::function<NormalFormGame(int)>& game_for_period,
                     const CeCalcOptions& options) {
    if (horizon < 1) throw std::invalid_argument("ce_calc horizon must be >= 1");
    if (!game_for_period) throw std::invalid_argument("ce_calc needs a game supplier");

    CeCalcResult result;
    for (int t = 0; t < horizon; ++t) {
        const NormalFormGame game = game_for_period(t);
        const NormalFormGame canonical = canonicalized(game);
        const std::vector<IncentiveRow> rows = incentive_rows(canonical);

        long ops = 0;
        for (int i = 0; i < game.n_players; ++i) {
            ops += static_cast<long>(game.n_actions[i]) * (game.n_actions[i] - 1);
        }
        result.assembly_ops.push_back(ops);

        const int n_profiles = game.profile_count();
        auto satisfies_dual = [&](const std::vector<double>& dual) {
            for (int phi = 0; phi < n_profiles; ++phi) {
                double dot = 0.0;
                for (std::size_t r = 0; r < rows.size(); ++r) {
                    dot += rows[r].coeffs[phi] * dual[r];
                }
                if (dot > -1.0 + 1e-12) return false;
            }
            return true;
        };

        // Dual walk: start at the origin of [0,1]^rows and step every element
        // up by epsilon while the iterate stays inside U^T p' <= -1. The
        // system is infeasible for every game with a CE, so the walk is
        // expected to stop immediately; the cap guards pathological inputs.
        std::vector<double> dual(rows.size(), 0.0);
        std::vector<std::vector<double>> collected;
        int l = 0;
        while (l < options.iteration_cap && satisfies_dual(dual)) {
            collected.push_back(dual);
            for (double& v : dual) v += options.epsilon;
            ++l;
        }

        if (l >= options.iteration_cap) {
            ++result.fallback_events;
            result.per_period.push_back(solve_ce(game, options.objective));
            continue;
        }

        LinearProgram lp = ce_lp(canonical);
        for (const auto& d : collected) {
            // Orthogonality to the collected dual: p . (U^T d) = 0.
            std::vector<double> row(static_cast<std::size_t>(n_profiles), 0.0);
            for (int phi = 0; phi < n_profiles; ++phi) {
                for (std::size_t r = 0; r < rows.size(); ++r) {
                    row[phi] += rows[r].coeffs[phi] * d[r];
                }
            }
            lp.rows.push_back(std::move(row));
            lp.relations.push_back(Relation::eq);
            lp.rhs.push_back(0.0);
        }
        try {
            result.per_period.push_back(solve_ce_lp(std::move(lp), canonical, options.objective));
        } catch (const std::runtime_error&) {
            // Orthogonality constraints ruled out every CE; fall back.
            ++result.fallback_events;
            result.per_period.push_back(solve_ce(game, options.objective));
        }
    }
    return result;
}

ParetoProfileSet pareto_profiles(const NormalFormGame& game,
                                 const std::vector<double>& weights) {
    game.validate();
    if (static_cast<int>(weights.size()) != game.n_players) {
        throw std::invalid_argument("need one weight per player");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("weights must be non-negative");
        total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("weights must not all be zero");

    const int n_profiles = game.profile_count();
    ParetoProfileSet out;
    double best = -std::numeric_limits<double>::infinity();
    for (int phi = 0; phi < n_profiles; ++phi) {
        bool dominated = false;
        for (int other = 0; other < n_profiles && !dominated; ++other) {
            if (other == phi) continue;
            bool all_ge = true;
            bool one_strict = false;
            for (int i = 0; i < game.n_players; ++i) {
                const double diff = game.utility(other, i) - game.utility(phi, i);
                if (diff < 0.0) {
                    all_ge = false;
                    break;
                }
                if (diff > 0.0) one_strict = true;
            }
            dominated = all_ge && one_strict;
        }
        if (dominated) continue;
        double welfare = 0.0;
        for (int i = 0; i < game.n_players; ++i) welfare += weights[i] * game.utility(phi, i);
        out.profiles.push_back(phi);
        out.welfare.push_back(welfare);
        if (welfare > best) {
            best = welfare;
            out.best_profile = phi;
        }
    }
    return out;
}

std::optional<CorrelatedEquilibrium> pareto_ce(const NormalFormGame& game) {
    const NormalFormGame canonical = canonicalized(game);
    const ParetoProfileSet pareto =
        pareto_profiles(canonical, std::vector<double>(game.n_players, 1.0));

    std::vector<bool> allowed(static_cast<std::size_t>(game.profile_count()), false);
    for (int phi : pareto.profiles) allowed[phi] = true;

    LinearProgram lp = ce_lp(canonical);
    for (int phi = 0; phi < game.profile_count(); ++phi) {
        if (allowed[phi]) continue;
        std::vector<double> row(static_cast<std::size_t>(game.profile_count()), 0.0);
        row[phi] = 1.0;
        lp.rows.push_back(std::move(row));
        lp.relations.push_back(Relation::eq);
        lp.rhs.push_back(0.0);
    }
    lp.objective = welfare_objective(canonical);
    lp.sense = Sense::maximize;
    const LpVerdict verdict = solve_lp(lp);
    if (verdict.status != LpStatus::optimal) return std::nullopt;
    return CorrelatedEquilibrium{verdict.solution};
}

bool is_ce(const NormalFormGame& game, const std::vector<double>& p, double tol) {
    game.validate();
    if (static_cast<int>(p.size()) != game.profile_count()) {
        throw std::invalid_argument("distribution length != profile count");
    }
    double sum = 0.0;
    for (double v : p) {
        if (v < -tol) return false;
        sum += v;
    }
    if (std::abs(sum - 1.0) > tol) return false;
    for (const IncentiveRow& row : incentive_rows(game)) {
        double dot = 0.0;
        for (int phi = 0; phi < game.profile_count(); ++phi) dot += row.coeffs[phi] * p[phi];
        if (dot < -tol) return false;
    }
    return true;
}

double expected_utility(const NormalFormGame& game, const std::vector<double>& p,
                        int player) {
    if (player < 0 || player >= game.n_players) {
        throw std::invalid_argument("player index out of range");
    }
    if (static_cast<int>(p.size()) != game.profile_count()) {
        throw std::invalid_argument("distribution length != profile count");
    }
    double value = 0.0;
    for (int phi = 0; phi < game.profile_count(); ++phi) {
        value += p[phi] * game.utility(phi, player);
    }
    return value;
}

}  // namespace pm
