#ifndef PMARKET_LMSR_HPP
#define PMARKET_LMSR_HPP

#include <cstddef>
#include <vector>

namespace pm {

/// Outstanding purchased units per security. Length is fixed at >= 2 for the
/// lifetime of a market; entries are real-valued shares and must stay finite.
class QuantityVector {
public:
    explicit QuantityVector(std::vector<double> units);

    std::size_t size() const { return units_.size(); }
    double operator[](std::size_t i) const { return units_[i]; }
    const std::vector<double>& units() const { return units_; }

    /// Shifts one coordinate by delta. Throws if the result is not finite.
    void add(std::size_t security, double delta);

    /// Copy with one coordinate shifted; the workhorse for payment formulas.
    QuantityVector shifted(std::size_t security, double delta) const;

private:
    std::vector<double> units_;
};

/// Market maker liquidity parameter b > 0. Scales price sensitivity and
/// bounds the worst-case market maker loss at b*ln(n_securities).
class Liquidity {
public:
    explicit Liquidity(double b);
    double value() const { return b_; }

private:
    double b_;
};

/// Instantaneous prices: each entry in (0,1), summing to 1 within 1e-12.
struct PriceVector {
    std::vector<double> prices;

    double operator[](std::size_t i) const { return prices[i]; }
    std::size_t size() const { return prices.size(); }
};

/// Cost function C(q) = b*ln(sum_j exp(q_j/b)), evaluated with a
/// log-sum-exp shift so intermediate exponentials cannot overflow.
/// Throws std::domain_error if the result is still not finite
/// (i.e. some q_j/b overflowed despite the shift).
double cost(const QuantityVector& q, Liquidity b);

/// Instantaneous prices, the softmax of q/b. Equal to the gradient of cost.
PriceVector price(const QuantityVector& q, Liquidity b);

/// Payment charged for buying delta > 0 units of one security:
/// C(q + delta*e_s) - C(q). Strictly positive.
double buy_payment(const QuantityVector& q, std::size_t security, double delta, Liquidity b);

/// Payout received for selling delta > 0 units: C(q) - C(q - delta*e_s).
/// Strictly positive and strictly below delta (prices stay below 1).
double sell_payout(const QuantityVector& q, std::size_t security, double delta, Liquidity b);

/// Terminal settlement: the realized security pays $1 per share, all others
/// pay nothing. Negative holdings (shorts) pay the symmetric amount.
/// `holdings` is one per-security share vector per agent.
std::vector<double> settle(const std::vector<std::vector<double>>& holdings,
                           std::size_t outcome);

}  // namespace pm

#endif  // PMARKET_LMSR_HPP
