#pragma once

#include <optional>
#include <vector>

#include "evsim/channel.hpp"
#include "evsim/delay.hpp"

namespace evsim {

// One user's radio parameters minus the bandwidth (the decision variable),
// plus the delay constraint the allocation must honor.
struct AllocationUser {
    double tx_power_w = 0.0;
    double distance_m = 0.0;
    double noise_density_w_hz = 0.0;
    DelayConstraint constraint;

    LinkProfile link_at(double bandwidth_hz, double block_s) const;
};

struct AllocationProblem {
    std::vector<AllocationUser> users;
    double total_bandwidth_hz = 50e6;
    double block_s = 0.1;
    double rate_tol = 1e3;       // phi_V, bit/s
    double bandwidth_tol = 1e2;  // phi_B, Hz

    void validate() const;
};

struct AllocationResult {
    double common_rate = 0.0;             // V*
    std::vector<double> bandwidth_hz;     // B_n
    std::vector<double> user_rate;        // per-user sustained rate at B_n
    bool feasible = false;
    int outer_iterations = 0;
    long inner_iterations = 0;            // summed over users and outer steps
    bool bracket_widened = false;
};

struct InnerSearchResult {
    bool feasible = false;
    double bandwidth_hz = 0.0;      // upper bisection endpoint: sustains the rate
    double rate_at_bandwidth = 0.0; // effective capacity at the returned bandwidth
    long iterations = 0;
};

// Smallest bandwidth in (0, cap] sustaining `rate` under the user's delay
// constraint, by bisection to width `bandwidth_tol`. theta is recomputed from
// `rate`, then held fixed across the search. Returns the upper endpoint so
// the reported bandwidth is guaranteed sufficient; infeasible if even the cap
// cannot sustain the rate.
InnerSearchResult min_bandwidth_for_rate(const AllocationUser& user, double rate,
                                         double bandwidth_cap, double block_s,
                                         double bandwidth_tol);

// Max-min fair rate/bandwidth allocation: outer bisection on the common rate
// between the extremes of the equal-split rates, inner per-user bandwidth
// bisections. The returned allocation uses the full bandwidth (leftover is
// spread equally) and every user sustains at least the common rate.
AllocationResult double_bisection(const AllocationProblem& problem);

// Baseline: everyone gets B/N; per-user rates computed individually.
AllocationResult identical_bandwidth(const AllocationProblem& problem);

} // namespace evsim
