#pragma once

#include "evsim/channel.hpp"

namespace evsim {

// Statistical delay requirement for one video stream. The cloud hop costs
// cloud_delay_s unless the requested video is cached at the edge.
struct DelayConstraint {
    double target_delay_s = 0.2;    // d
    double violation_prob = 1e-3;   // epsilon in (0,1)
    double cloud_delay_s = 0.1;     // d^C
    bool cached = false;            // delta = 0 if cached, 1 otherwise

    void validate() const;
};

// Wireless-hop delay budget in whole blocks: floor((d - d^C * delta) / T).
// d and d^C must be integer multiples of T; throws if the budget is <= 0.
int effective_budget_blocks(const DelayConstraint& c, double block_s);

// theta = -ln(eps) / (V * T * budget_blocks).
double theta_from_constraint(const DelayConstraint& c, double coding_rate, double block_s);

// Effective capacity at a given theta: V^max = -ln E[e^{-theta R T}] / (theta T).
double max_coding_rate(const ChannelQuad& quad, double theta);
double max_coding_rate(const LinkProfile& link, double theta);

// Chernoff bound on the delay violation probability at coding rate V, with
// theta calibrated from the constraint. Requires the stability condition
// V <= V^max(theta); throws naming the condition otherwise.
double dvp_bound(const ChannelQuad& quad, const DelayConstraint& c, double coding_rate);
double dvp_bound(const LinkProfile& link, const DelayConstraint& c, double coding_rate);

// Largest coding rate whose calibrated bound meets the constraint: the fixed
// point V = V^max(theta(V)), at which the bound equals eps exactly. Solved by
// bisection on the (monotone) log-bound residual.
double sustained_rate(const ChannelQuad& quad, const DelayConstraint& c);
double sustained_rate(const LinkProfile& link, const DelayConstraint& c);

} // namespace evsim
