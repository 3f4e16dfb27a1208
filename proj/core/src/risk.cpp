#include "pmarket/risk.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pm {

RiskPreference::RiskPreference(double theta) : theta_(theta) {
    if (!(theta > -1.0 && theta < 1.0)) {
        throw std::invalid_argument("risk preference factor must lie in (-1, 1)");
    }
}

double crra(double reward, double theta, NegativeRewardRule rule) {
    if (!std::isfinite(reward) || !std::isfinite(theta)) {
        throw std::invalid_argument("crra requires finite inputs");
    }
    if (theta == 0.0) return reward;
    if (theta == 1.0) {
        return std::log(std::abs(reward));
    }
    if (reward == 0.0) return 0.0;
    const double k = 1.0 - theta;
    if (reward > 0.0) {
        return std::pow(reward, k) / k;
    }
    const double mag = std::pow(-reward, k);
    if (rule == NegativeRewardRule::signed_power) {
        return -mag / k;
    }
    return mag * std::cos(std::numbers::pi * k) / k;
}

double crra(double reward, const RiskPreference& pref, NegativeRewardRule rule) {
    return crra(reward, pref.theta(), rule);
}

bool concavity_check(double theta, const std::vector<double>& grid,
                     NegativeRewardRule rule) {
    if (grid.size() < 3) {
        throw std::invalid_argument("concavity_check needs at least 3 grid points");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0)) {
            throw std::invalid_argument("concavity_check grid must be positive");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("concavity_check grid must be strictly increasing");
        }
    }
    double prev_slope = (crra(grid[1], theta, rule) - crra(grid[0], theta, rule)) /
                        (grid[1] - grid[0]);
    for (std::size_t i = 2; i < grid.size(); ++i) {
        const double slope = (crra(grid[i], theta, rule) - crra(grid[i - 1], theta, rule)) /
                             (grid[i] - grid[i - 1]);
        if (slope - prev_slope > 1e-9) return false;
        prev_slope = slope;
    }
    return true;
}

}  // namespace pm
