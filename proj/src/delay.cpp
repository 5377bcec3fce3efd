#include "evsim/delay.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace evsim {

void DelayConstraint::validate() const {
    if (!(target_delay_s > 0.0)) throw std::invalid_argument("DelayConstraint: target delay must be positive");
    if (!(violation_prob > 0.0 && violation_prob < 1.0)) {
        throw std::invalid_argument("DelayConstraint: violation probability must lie in (0,1)");
    }
    if (cloud_delay_s < 0.0) throw std::invalid_argument("DelayConstraint: cloud delay must be nonnegative");
}

namespace {

// d must be an integer multiple of T (block-granular accounting).
long to_blocks(double seconds, double block_s, const char* name) {
    const double ratio = seconds / block_s;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-6 * std::max(1.0, std::abs(ratio))) {
        throw std::invalid_argument(std::string(name) + " is not an integer multiple of the block length");
    }
    return static_cast<long>(rounded);
}

} // namespace

int effective_budget_blocks(const DelayConstraint& c, double block_s) {
    c.validate();
    if (!(block_s > 0.0)) throw std::invalid_argument("effective_budget_blocks: block length must be positive");
    const long d = to_blocks(c.target_delay_s, block_s, "target delay");
    const long dc = to_blocks(c.cloud_delay_s, block_s, "cloud delay");
    const long budget = d - (c.cached ? 0 : dc);
    if (budget <= 0) {
        throw std::invalid_argument("effective_budget_blocks: infeasible constraint (nonpositive delay budget)");
    }
    return static_cast<int>(budget);
}

double theta_from_constraint(const DelayConstraint& c, double coding_rate, double block_s) {
    if (!(coding_rate > 0.0)) throw std::invalid_argument("theta_from_constraint: coding rate must be positive");
    const int budget = effective_budget_blocks(c, block_s);
    return -std::log(c.violation_prob) / (coding_rate * block_s * static_cast<double>(budget));
}

double max_coding_rate(const ChannelQuad& quad, double theta) {
    if (!(theta > 0.0)) throw std::invalid_argument("max_coding_rate: theta must be positive");
    return -quad.log_neg_moment(theta) / (theta * quad.link().block_s);
}

double max_coding_rate(const LinkProfile& link, double theta) {
    return max_coding_rate(ChannelQuad(link), theta);
}

double dvp_bound(const ChannelQuad& quad, const DelayConstraint& c, double coding_rate) {
    const double block_s = quad.link().block_s;
    const int budget = effective_budget_blocks(c, block_s);
    const double theta = theta_from_constraint(c, coding_rate, block_s);
    const double log_m = quad.log_neg_moment(theta);
    const double vmax = -log_m / (theta * block_s);
    if (coding_rate > vmax * (1.0 + 1e-9)) {
        throw std::invalid_argument(
            "dvp_bound: stability condition violated (V exceeds -ln E[e^{-theta R T}] / (theta T))");
    }
    return std::exp(static_cast<double>(budget) * log_m);
}

double dvp_bound(const LinkProfile& link, const DelayConstraint& c, double coding_rate) {
    return dvp_bound(ChannelQuad(link), c, coding_rate);
}

double sustained_rate(const ChannelQuad& quad, const DelayConstraint& c) {
    const double block_s = quad.link().block_s;
    const int budget = effective_budget_blocks(c, block_s);
    const double kappa = -std::log(c.violation_prob) / (block_s * static_cast<double>(budget));

    // residual(V) = budget * ln E[e^{-theta(V) R T}] - ln eps, increasing in V
    // (theta = kappa / V shrinks as V grows, so the moment grows). The root is
    // the fixed point where the calibrated bound equals eps.
    auto residual = [&](double v) {
        return static_cast<double>(budget) * quad.log_neg_moment(kappa / v) - std::log(c.violation_prob);
    };

    double hi = quad.mean_rate(); // V^max < E[R] for theta > 0
    double lo = hi;
    for (int i = 0; i < 2048; ++i) {
        lo *= 0.5;
        if (residual(lo) < 0.0) break;
    }
    if (residual(lo) >= 0.0) {
        throw std::runtime_error("sustained_rate: failed to bracket the calibrated rate");
    }
    for (int i = 0; i < 200 && (hi - lo) > 1e-12 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) < 0.0 ? lo : hi) = mid;
    }
    return lo;
}

double sustained_rate(const LinkProfile& link, const DelayConstraint& c) {
    return sustained_rate(ChannelQuad(link), c);
}

} // namespace evsim
