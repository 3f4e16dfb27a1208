#include "pmarket/lmsr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pm {

namespace {

void require_finite(const std::vector<double>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("quantity vector entries must be finite");
        }
    }
}

}  // namespace

QuantityVector::QuantityVector(std::vector<double> units) : units_(std::move(units)) {
    if (units_.size() < 2) {
        throw std::invalid_argument("a market needs at least 2 securities");
    }
    require_finite(units_);
}

void QuantityVector::add(std::size_t security, double delta) {
    if (security >= units_.size()) {
        throw std::invalid_argument("security index out of range");
    }
    double next = units_[security] + delta;
    if (!std::isfinite(next)) {
        throw std::invalid_argument("quantity update produced a non-finite value");
    }
    units_[security] = next;
}

QuantityVector QuantityVector::shifted(std::size_t security, double delta) const {
    QuantityVector out(*this);
    out.add(security, delta);
    return out;
}

Liquidity::Liquidity(double b) : b_(b) {
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw std::invalid_argument("liquidity parameter b must be positive and finite");
    }
}

double cost(const QuantityVector& q, Liquidity b) {
    const double inv_b = 1.0 / b.value();
    double m = q[0] * inv_b;
    for (std::size_t j = 1; j < q.size(); ++j) {
        m = std::max(m, q[j] * inv_b);
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
        sum += std::exp(q[j] * inv_b - m);
    }
    const double c = b.value() * (m + std::log(sum));
    if (!std::isfinite(c)) {
        throw std::domain_error("LMSR cost overflow: |q/b| too large");
    }
    return c;
}

PriceVector price(const QuantityVector& q, Liquidity b) {
    const double inv_b = 1.0 / b.value();
    double m = q[0] * inv_b;
    for (std::size_t j = 1; j < q.size(); ++j) {
        m = std::max(m, q[j] * inv_b);
    }
    double sum = 0.0;
    std::vector<double> e(q.size());
    for (std::size_t j = 0; j < q.size(); ++j) {
        e[j] = std::exp(q[j] * inv_b - m);
        sum += e[j];
    }
    if (!std::isfinite(sum) || sum <= 0.0) {
        throw std::domain_error("LMSR price overflow: |q/b| too large");
    }
    // The softmax is strictly inside (0,1) for finite inputs; keep the
    // representable result there even when an exponential underflows.
    const double lo = std::numeric_limits<double>::min();
    const double hi = std::nextafter(1.0, 0.0);
    PriceVector out;
    out.prices.resize(q.size());
    for (std::size_t j = 0; j < q.size(); ++j) {
        out.prices[j] = std::clamp(e[j] / sum, lo, hi);
    }
    return out;
}

// Cost differences C(q + delta*e_s) - C(q) = b*ln(1 + p_s*(e^{delta/b}-1)),
// which sidesteps the cancellation of subtracting two nearly equal costs.
// Two evaluation forms cover the regimes: log1p for small perturbations, and
// (1-p_s) + p_s*e^{delta/b} with the complement summed directly from the
// other securities when the log1p argument would itself cancel (deep
// in-the-money sells). Falls back to raw cost differences when delta/b is
// out of exponent range.
static double cost_delta(const QuantityVector& q, std::size_t security, double delta,
                         Liquidity b) {
    const double x = delta / b.value();
    if (std::abs(x) > 500.0) {
        return cost(q.shifted(security, delta), b) - cost(q, b);
    }
    const double inv_b = 1.0 / b.value();
    double m = q[0] * inv_b;
    for (std::size_t j = 1; j < q.size(); ++j) m = std::max(m, q[j] * inv_b);
    double sum = 0.0;
    double complement = 0.0;
    double own = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
        const double e = std::exp(q[j] * inv_b - m);
        sum += e;
        if (j == security) {
            own = e;
        } else {
            complement += e;
        }
    }
    if (!std::isfinite(sum) || sum <= 0.0) {
        throw std::domain_error("LMSR payment overflow: |q/b| too large");
    }
    const double p = own / sum;
    const double growth = p * std::expm1(x);
    double payment;
    if (std::abs(growth) < 0.5) {
        payment = b.value() * std::log1p(growth);
    } else {
        payment = b.value() * std::log(complement / sum + p * std::exp(x));
    }
    if (!std::isfinite(payment)) {
        throw std::domain_error("LMSR payment overflow: |q/b| too large");
    }
    return payment;
}

double buy_payment(const QuantityVector& q, std::size_t security, double delta, Liquidity b) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw std::invalid_argument("buy_payment requires delta > 0");
    }
    return cost_delta(q, security, delta, b);
}

double sell_payout(const QuantityVector& q, std::size_t security, double delta, Liquidity b) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw std::invalid_argument("sell_payout requires delta > 0");
    }
    return -cost_delta(q, security, -delta, b);
}

std::vector<double> settle(const std::vector<std::vector<double>>& holdings,
                           std::size_t outcome) {
    std::vector<double> payouts;
    payouts.reserve(holdings.size());
    for (const auto& h : holdings) {
        if (outcome >= h.size()) {
            throw std::invalid_argument("settle: outcome index " + std::to_string(outcome) +
                                        " out of range for holdings of size " +
                                        std::to_string(h.size()));
        }
        payouts.push_back(h[outcome]);
    }
    return payouts;
}

}  // namespace pm
