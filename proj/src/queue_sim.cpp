#include "evsim/queue_sim.hpp"

#include <cmath>
#include <stdexcept>

namespace evsim {

QueueTrace simulate_queue(const LinkProfile& link, double coding_rate,
                          std::size_t blocks, std::size_t warmup, std::uint64_t seed,
                          double backlog_cap_blocks) {
    link.validate();
    if (coding_rate < 0.0) throw std::invalid_argument("simulate_queue: coding rate must be >= 0");
    if (blocks <= warmup) throw std::invalid_argument("simulate_queue: need blocks > warmup");

    QueueTrace trace;
    trace.total_blocks = blocks;
    trace.warmup_blocks = warmup;
    trace.coding_rate = coding_rate;
    trace.block_s = link.block_s;
    trace.backlog_bits.resize(blocks);
    trace.delay_blocks.assign(blocks - warmup, 0);
    trace.resolved.assign(blocks - warmup, 1);

    if (coding_rate == 0.0) return trace; // nothing queues, all delays zero

    Rng rng(seed);
    const double arrival_bits = coding_rate * link.block_s;
    const double service_scale = link.bandwidth_hz * link.block_s / (0.6931471805599453);
    const double snr = link.snr_scale();

    // Work in units of one block's arrival so departure targets are the
    // integers 1, 2, 3, ... and comparisons stay exact.
    double departed = 0.0;       // cumulative departures, arrival-block units
    std::size_t front = 0;       // oldest arrival block not fully departed
    for (std::size_t i = 0; i < blocks; ++i) {
        const double queued = static_cast<double>(i + 1) - departed;
        const double h = rng.exponential();
        const double service = service_scale * std::log1p(snr * h) / arrival_bits;
        departed += std::min(queued, service);
        while (front <= i && static_cast<double>(front + 1) <= departed + 1e-9) {
            if (front >= warmup) {
                trace.delay_blocks[front - warmup] = static_cast<std::int32_t>(i - front);
            }
            ++front;
        }
        const double backlog_units = static_cast<double>(i + 1) - departed;
        trace.backlog_bits[i] = backlog_units * arrival_bits;
        if (backlog_units > backlog_cap_blocks) trace.unstable = true;
    }
    // Arrival blocks still queued when the trace ends carry a delay lower
    // bound only.
    for (std::size_t j = std::max(front, warmup); j < blocks; ++j) {
        trace.delay_blocks[j - warmup] = static_cast<std::int32_t>(blocks - j);
        trace.resolved[j - warmup] = 0;
    }
    return trace;
}

DvpEstimate empirical_dvp(const QueueTrace& trace, int budget_blocks) {
    if (budget_blocks < 0) throw std::invalid_argument("empirical_dvp: negative budget");
    DvpEstimate est;
    for (std::size_t j = 0; j < trace.delay_blocks.size(); ++j) {
        const bool violation = trace.delay_blocks[j] > budget_blocks;
        if (trace.resolved[j]) {
            ++est.measured;
            if (violation) ++est.violations;
        } else if (violation) {
            // lower bound already exceeds the budget
            ++est.measured;
            ++est.violations;
        } // else: censored, excluded
    }
    if (est.measured == 0) throw std::runtime_error("empirical_dvp: no measurable arrival blocks");
    est.probability = static_cast<double>(est.violations) / static_cast<double>(est.measured);
    est.std_error = std::sqrt(est.probability * (1.0 - est.probability) /
                              static_cast<double>(est.measured));
    return est;
}

std::vector<SweepRow> dvp_sweep(const LinkProfile& link,
                                const std::vector<DelayConstraint>& grid,
                                std::size_t blocks, std::size_t warmup,
                                std::uint64_t seed) {
    ChannelQuad quad(link);
    Rng master(seed);
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        SweepRow row;
        row.constraint = grid[g];
        row.budget_blocks = effective_budget_blocks(grid[g], link.block_s);
        row.v_star = sustained_rate(quad, grid[g]);
        row.analytic_bound = dvp_bound(quad, grid[g], row.v_star);
        QueueTrace trace = simulate_queue(link, row.v_star, blocks, warmup,
                                          master.fork(g).seed());
        row.empirical = empirical_dvp(trace, row.budget_blocks);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace evsim
