#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "evsim/channel.hpp"
#include "evsim/delay.hpp"

namespace evsim {

// Discrete-time fluid queue: V*T bits arrive per block, the channel drains up
// to R(i)*T bits per block. Delay of an arrival block is the number of blocks
// until its last bit departs.
struct QueueTrace {
    std::size_t total_blocks = 0;
    std::size_t warmup_blocks = 0;
    double coding_rate = 0.0;
    double block_s = 0.0;
    bool unstable = false;

    std::vector<double> backlog_bits;    // backlog at the end of each block
    std::vector<std::int32_t> delay_blocks; // per measured arrival block (>= warmup)
    std::vector<std::uint8_t> resolved;  // 0: delay is a lower bound (trace ended first)
};

struct DvpEstimate {
    double probability = 0.0;
    double std_error = 0.0;     // binomial, normal approximation
    std::size_t measured = 0;
    std::size_t violations = 0;
};

QueueTrace simulate_queue(const LinkProfile& link, double coding_rate,
                          std::size_t blocks, std::size_t warmup, std::uint64_t seed,
                          double backlog_cap_blocks = 1e6);

// Fraction of measured arrival blocks with delay > budget_blocks. Unresolved
// blocks count as violations when even their lower bound exceeds the budget
// and are excluded from the denominator otherwise.
DvpEstimate empirical_dvp(const QueueTrace& trace, int budget_blocks);

struct SweepRow {
    DelayConstraint constraint;
    int budget_blocks = 0;
    double v_star = 0.0;          // calibrated coding rate
    double analytic_bound = 0.0;  // equals the constraint's epsilon at V*
    DvpEstimate empirical;
};

// For each constraint: calibrate V* on the link, simulate, and record the
// analytic bound next to the measured violation probability.
std::vector<SweepRow> dvp_sweep(const LinkProfile& link,
                                const std::vector<DelayConstraint>& grid,
                                std::size_t blocks, std::size_t warmup,
                                std::uint64_t seed);

} // namespace evsim
