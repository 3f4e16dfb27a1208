#ifndef PMARKET_RISK_HPP
#define PMARKET_RISK_HPP

#include <vector>

namespace pm {

/// How a negative monetary reward is mapped to utils, given that the power
/// R^{1-theta} of a negative base is complex-valued:
///   principal_complex: real part of the principal branch,
///                      |R|^{1-theta} * cos(pi*(1-theta)) / (1-theta).
///   signed_power:      -|R|^{1-theta} / (1-theta).
enum class NegativeRewardRule { principal_complex, signed_power };

/// Constant-relative-risk-aversion preference factor, restricted to (-1, 1).
/// theta = 0 is risk neutral, theta > 0 risk averse, theta < 0 risk seeking.
class RiskPreference {
public:
    explicit RiskPreference(double theta);
    double theta() const { return theta_; }

private:
    double theta_;
};

/// CRRA utility of a monetary reward:
///   theta == 0 -> R (exact identity)
///   theta == 1 -> ln|R|   (log branch; unreachable for valid RiskPreference)
///   R > 0      -> R^{1-theta} / (1-theta)
///   R == 0     -> 0
///   R < 0      -> per `rule` above
double crra(double reward, double theta,
            NegativeRewardRule rule = NegativeRewardRule::principal_complex);

double crra(double reward, const RiskPreference& pref,
            NegativeRewardRule rule = NegativeRewardRule::principal_complex);

/// Numerical concavity of crra(., theta) over a sorted positive grid:
/// true iff every second divided difference is <= 1e-9.
/// Throws for grids shorter than 3 points.
bool concavity_check(double theta, const std::vector<double>& grid,
                     NegativeRewardRule rule = NegativeRewardRule::principal_complex);

}  // namespace pm

#endif  // PMARKET_RISK_HPP
