#include "pmarket/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pm {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kFeasTol = 1e-9;
// Degenerate pivots leave O(1e-13) roundoff in the rhs; anything below this
// is noise and gets snapped to zero so later ratio tests cannot amplify it
// through a small pivot element.
constexpr double kRhsScrub = 1e-11;

// Equality-form tableau: rows of [structural | slack/surplus | artificial | rhs],
// solved as a minimization. Bland's rule throughout.
class SimplexTableau {
public:
    SimplexTableau(const LinearProgram& lp, const std::vector<double>& shifted_rhs)
        : n_(lp.n_vars()), m_(lp.n_rows()) {
        // Column layout: structural vars, then one slack/surplus per
        // inequality row, then artificials as needed.
        std::vector<int> slack_col(m_, -1);
        std::size_t cols = n_;
        for (std::size_t i = 0; i < m_; ++i) {
            if (lp.relations[i] != Relation::eq) {
                slack_col[i] = static_cast<int>(cols++);
            }
        }
        n_real_ = cols;
        std::vector<int> art_col(m_, -1);
        for (std::size_t i = 0; i < m_; ++i) {
            // After sign normalization (rhs >= 0): "<=" rows start with the
            // slack basic; ">=" and "=" rows need an artificial.
            const bool flip = shifted_rhs[i] < 0.0;
            Relation rel = lp.relations[i];
            if (flip && rel != Relation::eq) {
                rel = rel == Relation::le ? Relation::ge : Relation::le;
            }
            if (rel != Relation::le) {
                art_col[i] = static_cast<int>(cols++);
            }
        }
        total_ = cols;

        tab_.assign(m_, std::vector<double>(total_ + 1, 0.0));
        basis_.assign(m_, -1);
        artificial_.assign(total_, false);

        for (std::size_t i = 0; i < m_; ++i) {
            const double sign = shifted_rhs[i] < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; ++j) {
                tab_[i][j] = sign * lp.rows[i][j];
            }
            tab_[i][total_] = sign * shifted_rhs[i];
            Relation rel = lp.relations[i];
            if (sign < 0.0 && rel != Relation::eq) {
                rel = rel == Relation::le ? Relation::ge : Relation::le;
            }
            if (slack_col[i] >= 0) {
                tab_[i][slack_col[i]] = rel == Relation::le ? 1.0 : -1.0;
            }
            if (rel == Relation::le) {
                basis_[i] = slack_col[i];
            } else {
                tab_[i][art_col[i]] = 1.0;
                basis_[i] = art_col[i];
                artificial_[art_col[i]] = true;
            }
        }
        has_artificials_ = false;
        for (std::size_t j = 0; j < total_; ++j) has_artificials_ |= artificial_[j];
    }

    // Runs phase 1 (if needed) and phase 2 on the given minimization
    // objective over structural columns. Returns the final status; on
    // unbounded, `ray` receives the recession direction over structural vars.
    LpStatus minimize(const std::vector<double>& objective, std::vector<double>* solution,
                      std::vector<double>* ray) {
        if (has_artificials_) {
            std::vector<double> phase1(total_, 0.0);
            for (std::size_t j = 0; j < total_; ++j) {
                if (artificial_[j]) phase1[j] = 1.0;
            }
            ban_artificials_ = false;
            const LpStatus st = run(phase1, nullptr);
            if (st != LpStatus::optimal) {
                // Phase 1 is bounded below by zero, so this cannot happen.
                throw std::logic_error("phase 1 simplex reported unbounded");
            }
            double infeas = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                if (basis_[i] >= 0 && artificial_[basis_[i]]) infeas += tab_[i][total_];
            }
            if (infeas > kFeasTol) return LpStatus::infeasible;
            purge_artificials();
        }
        std::vector<double> full(total_, 0.0);
        for (std::size_t j = 0; j < n_ && j < objective.size(); ++j) full[j] = objective[j];
        ban_artificials_ = true;
        const LpStatus st = run(full, ray);
        if (st == LpStatus::optimal && solution) {
            solution->assign(n_, 0.0);
            for (std::size_t i = 0; i < m_; ++i) {
                if (basis_[i] >= 0 && static_cast<std::size_t>(basis_[i]) < n_) {
                    (*solution)[basis_[i]] = tab_[i][total_];
                }
            }
        }
        return st;
    }

private:
    void pivot(std::size_t r, std::size_t s) {
        const double inv = 1.0 / tab_[r][s];
        for (std::size_t j = 0; j <= total_; ++j) tab_[r][j] *= inv;
        tab_[r][s] = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            const double f = tab_[i][s];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= total_; ++j) tab_[i][j] -= f * tab_[r][j];
            tab_[i][s] = 0.0;
        }
        basis_[r] = static_cast<int>(s);
        for (std::size_t i = 0; i < m_; ++i) {
            if (std::abs(tab_[i][total_]) < kRhsScrub) tab_[i][total_] = 0.0;
        }
    }

    std::vector<double> reduced_costs(const std::vector<double>& obj) const {
        std::vector<double> z(obj);
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = basis_[i] >= 0 ? obj[basis_[i]] : 0.0;
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j < total_; ++j) z[j] -= cb * tab_[i][j];
        }
        return z;
    }

    LpStatus run(const std::vector<double>& obj, std::vector<double>* ray) {
        const std::size_t cap = 50000 + 200 * (m_ + total_);
        for (std::size_t iter = 0;; ++iter) {
            if (iter > cap) {
                throw std::runtime_error("simplex iteration cap exceeded");
            }
            const std::vector<double> z = reduced_costs(obj);
            // Bland: the lowest-index column that improves the objective.
            int enter = -1;
            for (std::size_t j = 0; j < total_; ++j) {
                if (ban_artificials_ && artificial_[j]) continue;
                if (z[j] < -kPivotTol) {
                    enter = static_cast<int>(j);
                    break;
                }
            }
            if (enter < 0) return LpStatus::optimal;

            // Ratio test with Bland's tie-break: exact-minimum ratio, then
            // the smallest basis variable index among exact ties. Negative
            // rhs can only be degeneracy noise, so it is treated as zero;
            // otherwise a noise row divided by a tiny pivot would take a
            // negative step and wreck feasibility.
            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                if (tab_[i][enter] <= kPivotTol) continue;
                const double ratio = std::max(tab_[i][total_], 0.0) / tab_[i][enter];
                if (leave < 0 || ratio < best ||
                    (ratio == best && basis_[i] < basis_[leave])) {
                    best = ratio;
                    leave = static_cast<int>(i);
                }
            }
            if (leave < 0) {
                if (ray) {
                    // Recession direction: raise the entering variable by 1,
                    // basic variables adjust by minus their column entries.
                    ray->assign(n_, 0.0);
                    if (static_cast<std::size_t>(enter) < n_) (*ray)[enter] = 1.0;
                    for (std::size_t i = 0; i < m_; ++i) {
                        if (basis_[i] >= 0 && static_cast<std::size_t>(basis_[i]) < n_) {
                            (*ray)[basis_[i]] = -tab_[i][enter];
                        }
                    }
                }
                return LpStatus::unbounded;
            }
            pivot(static_cast<std::size_t>(leave), static_cast<std::size_t>(enter));
        }
    }

    // Pivot zero-valued artificials out of the basis where possible; rows
    // that are zero across all real columns are redundant and dropped.
    void purge_artificials() {
        for (std::size_t i = 0; i < m_;) {
            if (basis_[i] < 0 || !artificial_[basis_[i]]) {
                ++i;
                continue;
            }
            int col = -1;
            for (std::size_t j = 0; j < n_real_; ++j) {
                if (std::abs(tab_[i][j]) > kPivotTol) {
                    col = static_cast<int>(j);
                    break;
                }
            }
            if (col >= 0) {
                pivot(i, static_cast<std::size_t>(col));
                ++i;
            } else {
                tab_.erase(tab_.begin() + static_cast<long>(i));
                basis_.erase(basis_.begin() + static_cast<long>(i));
                --m_;
            }
        }
    }

    std::size_t n_;       // structural columns
    std::size_t m_;       // rows
    std::size_t n_real_;  // structural + slack/surplus columns
    std::size_t total_;   // all columns
    std::vector<std::vector<double>> tab_;
    std::vector<int> basis_;
    std::vector<bool> artificial_;
    bool has_artificials_ = false;
    bool ban_artificials_ = false;
};

}  // namespace

void LinearProgram::validate() const {
    if (rows.size() != rhs.size() || rows.size() != relations.size()) {
        throw std::invalid_argument("LP row/rhs/relation counts disagree");
    }
    for (const auto& row : rows) {
        if (row.size() != n_vars()) {
            throw std::invalid_argument("LP row width != objective length");
        }
        for (double v : row) {
            if (!std::isfinite(v)) throw std::invalid_argument("LP coefficients must be finite");
        }
    }
    for (double v : objective) {
        if (!std::isfinite(v)) throw std::invalid_argument("LP objective must be finite");
    }
    for (double v : rhs) {
        if (!std::isfinite(v)) throw std::invalid_argument("LP rhs must be finite");
    }
    if (!lower_bounds.empty()) {
        if (lower_bounds.size() != n_vars()) {
            throw std::invalid_argument("LP lower bound count != variable count");
        }
        for (double v : lower_bounds) {
            if (!std::isfinite(v)) throw std::invalid_argument("LP lower bounds must be finite");
        }
    }
}

LpVerdict solve_lp(const LinearProgram& lp) {
    lp.validate();
    const std::size_t n = lp.n_vars();

    // Shift x = lb + y so the tableau works with y >= 0.
    std::vector<double> lb(n, 0.0);
    if (!lp.lower_bounds.empty()) lb = lp.lower_bounds;
    std::vector<double> shifted_rhs(lp.n_rows());
    for (std::size_t i = 0; i < lp.n_rows(); ++i) {
        double dot = 0.0;
        for (std::size_t j = 0; j < n; ++j) dot += lp.rows[i][j] * lb[j];
        shifted_rhs[i] = lp.rhs[i] - dot;
    }

    std::vector<double> obj(lp.objective);
    if (lp.sense == Sense::maximize) {
        for (double& c : obj) c = -c;
    }

    SimplexTableau tableau(lp, shifted_rhs);
    std::vector<double> y, ray;
    const LpStatus st = tableau.minimize(obj, &y, &ray);

    LpVerdict verdict;
    verdict.status = st;
    if (st == LpStatus::optimal) {
        verdict.solution.resize(n);
        for (std::size_t j = 0; j < n; ++j) verdict.solution[j] = lb[j] + y[j];
        double value = 0.0;
        for (std::size_t j = 0; j < n; ++j) value += lp.objective[j] * verdict.solution[j];
        verdict.objective = value;
    } else if (st == LpStatus::unbounded) {
        verdict.ray = std::move(ray);
    }
    return verdict;
}

bool check_feasible(const LinearProgram& lp, const std::vector<double>& x, double tol) {
    lp.validate();
    if (x.size() != lp.n_vars()) {
        throw std::invalid_argument("check_feasible: point dimension != variable count");
    }
    for (std::size_t j = 0; j < lp.n_vars(); ++j) {
        const double lb = lp.lower_bounds.empty() ? 0.0 : lp.lower_bounds[j];
        if (x[j] < lb - tol) return false;
    }
    for (std::size_t i = 0; i < lp.n_rows(); ++i) {
        double dot = 0.0;
        for (std::size_t j = 0; j < lp.n_vars(); ++j) dot += lp.rows[i][j] * x[j];
        switch (lp.relations[i]) {
            case Relation::le:
                if (dot > lp.rhs[i] + tol) return false;
                break;
            case Relation::ge:
                if (dot < lp.rhs[i] - tol) return false;
                break;
            case Relation::eq:
                if (std::abs(dot - lp.rhs[i]) > tol) return false;
                break;
        }
    }
    return true;
}

}  // namespace pm
