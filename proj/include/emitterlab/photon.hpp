// photon.hpp — seeded Monte Carlo photon click streams (pulsed HBT, XX-X
// cascade, blinking telegraph) plus full-pairwise coincidence histogramming
// and the exact enumeration oracle for the pulsed g2 center/side area ratio.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace eml {

struct PulseTrainConfig {
    double rep_period_ps{12500.0};  // 80 MHz default
    std::uint64_t n_pulses{0};
    double p_emit{0.0};    // per-pulse probability of at least one photon
    double p_double{0.0};  // per-pulse probability of two photons
    double t1_ns{1.0};     // emission delay time constant
    std::array<double, 2> detector_efficiency{1.0, 1.0};
    double dark_rate_hz{0.0};  // per channel
    double jitter_sigma_ps{0.0};
    std::uint64_t seed{0};

    void validate() const;
};

struct CascadeConfig {
    double rep_period_ps{12500.0};
    std::uint64_t n_pulses{0};
    double p_xx{0.0};      // biexciton-first cascade probability
    double p_x_only{0.0};  // lone-exciton probability
    double tau_xx_ns{0.54};
    double tau_x_ns{1.59};
    std::array<double, 2> efficiency{1.0, 1.0};  // [XX channel, X channel]
    std::uint64_t seed{0};

    void validate() const;
};

struct BlinkingConfig {
    double on_dwell_ns{1.0};   // mean emitting-state dwell
    double off_dwell_ns{1.0};  // mean dark-state dwell
    PulseTrainConfig base;

    void validate() const;
};

struct ClickStream {
    std::vector<std::vector<std::uint64_t>> channels;  // sorted timestamps, ps
    std::uint64_t duration_ps{0};
    // Generation parameters echoed as ordered key=value text.
    std::vector<std::pair<std::string, std::string>> metadata;

    std::uint64_t total_clicks() const {
        std::uint64_t n = 0;
        for (const auto& c : channels) n += c.size();
        return n;
    }
};

struct CorrelationHistogram {
    std::int64_t bin_width_ps{0};
    std::int64_t range_ps{0};  // symmetric +-range
    std::vector<std::uint64_t> counts;
    std::uint64_t total_starts{0};
    std::uint64_t total_stops{0};

    double bin_center_ps(std::size_t i) const {
        return static_cast<double>(-range_ps) +
               (static_cast<double>(i) + 0.5) * static_cast<double>(bin_width_ps);
    }
};

// Two-detector pulsed stream: per pulse 0/1/2 photons with probabilities
// (1-p_emit, p_emit-p_double, p_double), exponential emission delays, 50:50
// routing, per-channel detection efficiency, Gaussian timing jitter (applied
// before integer-ps truncation) and per-channel Poisson dark counts.
ClickStream simulate_hbt(const PulseTrainConfig& config);

// Channel 0 = XX, channel 1 = X. With probability p_xx the pulse produces an
// XX photon at pulse + Exp(tau_xx) followed by an X photon a further
// Exp(tau_x) later; with probability p_x_only a lone X photon at
// pulse + Exp(tau_x).
ClickStream simulate_cascade(const CascadeConfig& config);

// Exponential-dwell two-state telegraph gates the pulse train: pulses during
// OFF emit nothing. Initial state drawn from the stationary occupancy.
ClickStream simulate_blinking(const BlinkingConfig& config);

// Histogram of all pairwise delays t_b - t_a with |delta| <= range (full
// correlation, not start-stop). bin_width must divide 2*range; delays map to
// bins by floor((delta + range)/bin_width) with the upper edge clamped into
// the last bin. Self-pairs are excluded when chan_a == chan_b.
CorrelationHistogram correlate(const ClickStream& stream, std::size_t chan_a,
                               std::size_t chan_b, std::int64_t bin_width_ps,
                               std::int64_t range_ps);

// Expected center-peak to side-peak area ratio for simulate_hbt streams,
// computed by exhaustive enumeration over per-pulse outcomes (photon number x
// routing x detection). Ground truth for fitted g2(0); requires dark_rate = 0.
double expected_g2_center(const PulseTrainConfig& config);

}  // namespace eml
