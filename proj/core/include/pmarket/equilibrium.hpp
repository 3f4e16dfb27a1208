#ifndef PMARKET_EQUILIBRIUM_HPP
#define PMARKET_EQUILIBRIUM_HPP

#include <functional>
#include <optional>
#include <vector>

#include "pmarket/game.hpp"
#include "pmarket/lmsr.hpp"
#include "pmarket/lp.hpp"
#include "pmarket/posgi.hpp"
#include "pmarket/risk.hpp"

namespace pm {

/// Distribution over joint profiles satisfying the correlated-equilibrium
/// incentive constraints: following a privately received recommendation is
/// at least as good as any unilateral deviation.
struct CorrelatedEquilibrium {
    std::vector<double> p;
};

/// Per-period stage game over {sell, hold, buy} per agent. Each agent's
/// monetary reward prices its one-unit trade with the other agents' trades
/// from the same profile already applied, averaged over all agent orderings
/// so no agent enjoys a systematic queue advantage:
///   buy:  estimate - buy_payment(q_after_others, 1 unit)
///   sell: sell_payout(q_after_others, 1 unit) - estimate
///   hold: 0
/// Rewards are then mapped through CRRA with each agent's theta.
NormalFormGame build_stage_game(const MarketState& s, std::size_t traded_security,
                                Liquidity b, const std::vector<double>& estimates,
                                const std::vector<double>& thetas,
                                NegativeRewardRule rule = NegativeRewardRule::principal_complex);

/// Incentive rows of the CE polytope, one per (player, recommended action,
/// deviation): sum over opponate profiles of
///   p(rec, others) * (u_i(rec, others) - u_i(dev, others)) >= 0.
/// Row order: player-major, then recommended action, then deviation.
struct IncentiveRow {
    int player;
    int recommended;
    int deviation;
    std::vector<double> coeffs;  // one per joint profile
};
std::vector<IncentiveRow> incentive_rows(const NormalFormGame& game);

/// The CE feasibility system as a linear program (zero objective): the
/// incentive rows, the normalization equality, and p >= 0. Variables are
/// joint profiles in the game's lexicographic order.
LinearProgram ce_constraints(const NormalFormGame& game);

enum class CeObjective { utilitarian, uniform };

/// Solves for a correlated equilibrium. Under `utilitarian` the returned
/// distribution maximizes expected total utility over the CE polytope;
/// `uniform` returns whichever feasible vertex phase-1 lands on.
/// Infeasibility is a contract violation and throws.
CorrelatedEquilibrium solve_ce(const NormalFormGame& game,
                               CeObjective objective = CeObjective::utilitarian);

/// Existence test via the dual system U^T p' <= -1, p' >= 0: a CE exists
/// iff that system is infeasible.
struct DualFeasibility {
    bool exists_ce;
};
DualFeasibility dual_feasibility_test(const NormalFormGame& game);

struct CeCalcOptions {
    double epsilon = 1e-3;      // per-element dual increment
    int iteration_cap = 10000;  // dual walk cap before the LP fallback
    CeObjective objective = CeObjective::utilitarian;
};

struct CeCalcResult {
    std::vector<CorrelatedEquilibrium> per_period;
    std::vector<long> assembly_ops;  // utility-difference pairs assembled per period
    int fallback_events = 0;
};

/// Per-period CE computation: assembles the utility-difference matrix U,
/// walks the dual iterate p' upward while it satisfies U^T p' <= -1
/// (collecting visited duals), then solves for a CE distribution orthogonal
/// to the collected duals. If the walk hits the iteration cap the direct LP
/// solution is used and the fallback is counted.
CeCalcResult ce_calc(int horizon,
                     const std::function<NormalFormGame(int)>& game_for_period,
                     const CeCalcOptions& options = {});

/// Joint pure profiles not Pareto-dominated, with their weighted welfare.
struct ParetoProfileSet {
    std::vector<int> profiles;       // ascending profile indices
    std::vector<double> welfare;     // weighted welfare, aligned with `profiles`
    int best_profile = -1;           // argmax of weighted welfare (ties: lowest index)
};
ParetoProfileSet pareto_profiles(const NormalFormGame& game,
                                 const std::vector<double>& weights);

/// Welfare-maximal CE restricted to support inside the Pareto set, or
/// nothing when no CE lives there (the caller then falls back to solve_ce).
std::optional<CorrelatedEquilibrium> pareto_ce(const NormalFormGame& game);

/// Verifier for the CE conditions at tolerance tol.
bool is_ce(const NormalFormGame& game, const std::vector<double>& p, double tol);

double expected_utility(const NormalFormGame& game, const std::vector<double>& p,
                        int player);

}  // namespace pm

#endif  // PMARKET_EQUILIBRIUM_HPP
