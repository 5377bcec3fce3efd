#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "evsim/rng.hpp"

namespace evsim {

// One downlink: orthogonal channel, Rayleigh block fading (unit-mean
// exponential power gain), capacity per block
//   R = B * log2(1 + p * h * l / (N0 * B)).
struct LinkProfile {
    double bandwidth_hz = 0.0;      // B
    double tx_power_w = 0.0;        // p
    double distance_m = 0.0;        // rho
    double path_gain = 0.0;         // l, large-scale gain
    double noise_density_w_hz = 0.0; // N0
    double block_s = 0.0;           // T, coherence block length

    // p * l / (N0 * B): mean SNR seen by the unit-mean fading gain.
    double snr_scale() const;
    void validate() const;
};

// Large-scale gain l = 1e-3 * rho^-2 (30 dB attenuation at 1 m reference).
double path_loss(double distance_m);

LinkProfile make_link(double bandwidth_hz, double tx_power_w, double distance_m,
                      double noise_density_w_hz, double block_s);

// i.i.d. AP-user distances, uniform over [lo, hi].
std::vector<double> place_users(std::size_t count, double lo_m, double hi_m, Rng& rng);

// One fading block's capacity draw (bit/s).
double sample_capacity(const LinkProfile& link, Rng& rng);

// Deterministic quadrature over the fading law for one link. Nodes are laid
// out uniformly in y = ln(h) over a window wide enough to cover both tails,
// so the integrand stays resolved even at extreme SNR scales; the half-
// resolution residual acts as a convergence tripwire.
class ChannelQuad {
public:
    explicit ChannelQuad(const LinkProfile& link);

    // ln E[exp(-theta * R * T)], theta >= 0. Exact 0 at theta == 0.
    double log_neg_moment(double theta) const;

    // E[exp(-theta * R * T)] in (0, 1]; 1 iff theta == 0.
    double neg_moment(double theta) const;

    // E[R] (bit/s).
    double mean_rate() const;

    const LinkProfile& link() const { return link_; }
    std::size_t node_count() const { return rate_.size(); }

private:
    LinkProfile link_;
    std::vector<double> log_weight_; // ln(trapezoid weight * exp-density)
    std::vector<double> rate_;       // R at each node
};

// Convenience wrappers building a one-shot ChannelQuad.
double neg_moment(const LinkProfile& link, double theta);
double mean_capacity(const LinkProfile& link);

} // namespace evsim
