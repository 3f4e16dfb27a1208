// Fixed suite of 50 small linear programs with known verdicts, used by the
// unit tests and the acceptance gate. Optimal objectives are exact rationals.
#ifndef PMARKET_TESTS_LP_SUITE_HPP
#define PMARKET_TESTS_LP_SUITE_HPP

#include <optional>
#include <string>
#include <vector>

#include "pmarket/lp.hpp"

namespace pmtest {

struct LpCase {
    std::string name;
    pm::LinearProgram lp;
    pm::LpStatus expected;
    std::optional<double> objective;  // set for optimal cases
};

inline std::vector<LpCase> lp_suite() {
    using pm::LinearProgram;
    using pm::LpStatus;
    using pm::Relation;
    using pm::Sense;
    std::vector<LpCase> cases;

    auto add = [&cases](std::string name, Sense sense, std::vector<double> c,
                        std::vector<std::vector<double>> rows, std::vector<Relation> rel,
                        std::vector<double> rhs, LpStatus status,
                        std::optional<double> obj = std::nullopt,
                        std::vector<double> lb = {}) {
        LinearProgram lp;
        lp.sense = sense;
        lp.objective = std::move(c);
        lp.rows = std::move(rows);
        lp.relations = std::move(rel);
        lp.rhs = std::move(rhs);
        lp.lower_bounds = std::move(lb);
        cases.push_back({std::move(name), std::move(lp), status, obj});
    };

    const auto maxi = Sense::maximize;
    const auto mini = Sense::minimize;
    const auto le = Relation::le;
    const auto ge = Relation::ge;
    const auto eq = Relation::eq;
    const auto opt = LpStatus::optimal;
    const auto inf = LpStatus::infeasible;
    const auto unb = LpStatus::unbounded;

    // --- optimal -----------------------------------------------------------
    add("box-1d", maxi, {1}, {{1}}, {le}, {3}, opt, 3.0);
    add("min-above", mini, {1}, {{1}}, {ge}, {2}, opt, 2.0);
    add("two-var-vertex", maxi, {3, 2}, {{1, 1}, {1, 0}, {0, 1}}, {le, le, le}, {4, 3, 3},
        opt, 11.0);
    add("degenerate-corner", maxi, {1, 1}, {{1, 0}, {0, 1}, {1, 1}}, {le, le, le}, {1, 1, 2},
        opt, 2.0);
    add("budget-line", maxi, {2, 1}, {{1, 1}}, {le}, {1}, opt, 2.0);
    add("min-cover", mini, {1, 1}, {{1, 1}, {1, 0}}, {ge, le}, {2, 5}, opt, 2.0);
    add("eq-max", maxi, {1, 0}, {{1, 2}, {0, 1}}, {eq, le}, {4, 1}, opt, 4.0);
    add("eq-min", mini, {1, 0}, {{1, 2}, {0, 1}}, {eq, le}, {4, 1}, opt, 2.0);
    add("three-var-chain", maxi, {1, 2, 3}, {{1, 1, 1}, {0, 1, 1}, {0, 0, 1}}, {le, le, le},
        {10, 5, 2}, opt, 17.0);
    add("fractional", maxi, {5}, {{2}}, {le}, {7}, opt, 17.5);
    add("min-weighted", mini, {2, 3}, {{1, 1}, {1, 0}}, {ge, ge}, {4, 1}, opt, 8.0);
    add("signed-objective", maxi, {1, -1}, {{1, 0}}, {le}, {2}, opt, 2.0);
    add("wedge", maxi, {0, 1}, {{1, 1}, {1, -1}}, {le, ge}, {3, -1}, opt, 2.0);
    add("unique-point", maxi, {1, 1}, {{1, 1}, {1, -1}}, {eq, eq}, {3, 1}, opt, 3.0);
    add("lb-only", mini, {1}, {}, {}, {}, opt, -5.0, {-5});
    add("lb-box", maxi, {1, 1}, {{1, 0}, {0, 1}}, {le, le}, {2, 1}, opt, 3.0, {-1, -2});
    add("min-negated", mini, {-1, -1}, {{1, 2}, {3, 1}}, {le, le}, {4, 6}, opt, -2.8);
    add("interior-vertex", maxi, {4, 3}, {{2, 1}, {1, 3}, {1, 0}}, {le, le, le}, {10, 15, 4},
        opt, 24.0);
    add("transport", mini, {1, 2, 3, 1},
        {{1, 1, 0, 0}, {0, 0, 1, 1}, {1, 0, 1, 0}}, {eq, eq, le}, {3, 2, 4}, opt, 5.0);
    add("zero-objective", maxi, {0}, {{1}}, {le}, {1}, opt, 0.0);

    // --- infeasible ---------------------------------------------------------
    add("neg-upper", maxi, {1}, {{1}}, {le}, {-1}, inf);
    add("band-conflict", maxi, {1, 1}, {{1, 1}, {1, 1}}, {le, ge}, {1, 2}, inf);
    add("eq-conflict", maxi, {1}, {{1}, {1}}, {eq, eq}, {1, 2}, inf);
    add("neg-eq-sum", maxi, {1, 1}, {{1, 1}}, {eq}, {-3}, inf);
    add("crossed-bounds", maxi, {1}, {{1}, {1}}, {ge, le}, {2, 1}, inf);
    add("mutual-gap", maxi, {1, 1}, {{1, -1}, {-1, 1}}, {ge, ge}, {1, 1}, inf);
    add("eq-pair-conflict", maxi, {1, 1, 1}, {{1, 1, 1}, {1, 1, 1}}, {eq, eq}, {1, 2}, inf);
    add("scaled-conflict", maxi, {1}, {{2}, {4}}, {eq, eq}, {1, 3}, inf);
    add("neg-eq-scalar", maxi, {1}, {{1}}, {eq}, {-0.5}, inf);
    add("capacity-short", maxi, {1, 1}, {{1, 1}, {1, 0}, {0, 1}}, {ge, le, le}, {5, 2, 2},
        inf);
    add("eq-over-box", maxi, {1, 1}, {{1, 1}, {1, 0}, {0, 1}}, {eq, le, le}, {10, 3, 3},
        inf);
    add("lb-vs-upper", maxi, {1}, {{1}}, {le}, {-10}, inf, std::nullopt, {-5});
    add("triangle-gap", maxi, {1, 1}, {{1, 0}, {0, 1}, {1, 1}}, {ge, ge, le}, {1, 1, 1.5},
        inf);
    add("pinned-too-high", maxi, {1}, {{1}, {1}}, {eq, le}, {5, 4}, inf);
    add("shifted-eq", maxi, {1, 1}, {{1, -1}, {1, 0}}, {eq, le}, {2, 1}, inf);

    // --- unbounded ----------------------------------------------------------
    add("free-max", maxi, {1}, {}, {}, {}, unb);
    add("untied-var", maxi, {1, 0}, {{0, 1}}, {le}, {3}, unb);
    add("diff-objective", maxi, {1, -1}, {{0, 1}}, {le}, {3}, unb);
    add("min-to-minus-inf", mini, {-2}, {{1}}, {ge}, {1}, unb);
    add("diagonal-ray", maxi, {1, 1}, {{1, -1}}, {le}, {0}, unb);
    add("above-only", maxi, {1}, {{1}}, {ge}, {5}, unb);
    add("eq-ray", maxi, {2, 3}, {{1, -1}}, {eq}, {0}, unb);
    add("min-drop", mini, {1, -2}, {{1, 0}}, {le}, {5}, unb);
    add("spare-dimension", maxi, {1, 1, 1}, {{1, 1, 0}}, {le}, {1}, unb);
    add("open-above", maxi, {0, 1}, {{1, 1}}, {ge}, {2}, unb);
    add("min-negative-sum", mini, {-1, -1}, {{-1, -1}}, {le}, {-2}, unb);
    add("lb-free-max", maxi, {1}, {}, {}, {}, unb, std::nullopt, {-5});
    add("zero-row-escape", maxi, {0, 0, 3}, {{1, 1, 0}}, {eq}, {1}, unb);
    add("pinned-but-open", maxi, {1, -2}, {{0, 1}}, {eq}, {0}, unb);
    add("reverse-min", mini, {-1, 1}, {{0, 1}}, {le}, {2}, unb);

    return cases;
}

}  // namespace pmtest

#endif  // PMARKET_TESTS_LP_SUITE_HPP
