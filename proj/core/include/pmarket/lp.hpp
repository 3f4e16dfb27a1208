#ifndef PMARKET_LP_HPP
#define PMARKET_LP_HPP

#include <vector>

namespace pm {

enum class Relation { le, eq, ge };
enum class Sense { maximize, minimize };
enum class LpStatus { optimal, infeasible, unbounded };

/// A dense linear program:
///   optimize  c.x   subject to  rows[i].x (rel_i) rhs[i],  x >= lower_bounds.
/// Empty lower_bounds means all-zero bounds.
struct LinearProgram {
    Sense sense = Sense::maximize;
    std::vector<double> objective;
    std::vector<std::vector<double>> rows;
    std::vector<Relation> relations;
    std::vector<double> rhs;
    std::vector<double> lower_bounds;

    std::size_t n_vars() const { return objective.size(); }
    std::size_t n_rows() const { return rows.size(); }
    void validate() const;
};

struct LpVerdict {
    LpStatus status = LpStatus::optimal;
    std::vector<double> solution;  // set when optimal
    double objective = 0.0;        // set when optimal, in the original sense
    std::vector<double> ray;       // set when unbounded: an improving recession direction
};

/// Two-phase dense simplex with Bland's anti-cycling pivot rule.
/// Deterministic: identical inputs give bit-identical verdicts.
/// Pivot tolerance 1e-10, feasibility tolerance 1e-9.
LpVerdict solve_lp(const LinearProgram& lp);

/// True iff x satisfies every constraint and bound within tol.
bool check_feasible(const LinearProgram& lp, const std::vector<double>& x, double tol);

}  // namespace pm

#endif  // PMARKET_LP_HPP
