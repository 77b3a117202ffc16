#include "emitterlab/photon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "emitterlab/errors.hpp"
#include "emitterlab/rng.hpp"

namespace eml {
namespace {

// Substream allocation: 0 = emission/routing/detection/jitter,
// 1..2 = per-channel dark counts, 3 = blinking telegraph.
constexpr std::uint64_t kEmissionStream = 0;
constexpr std::uint64_t kDarkStreamBase = 1;
constexpr std::uint64_t kTelegraphStream = 3;

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void append_meta(ClickStream& s, const std::string& k, double v) {
    s.metadata.emplace_back(k, fmt_num(v));
}

void append_meta(ClickStream& s, const std::string& k, std::uint64_t v) {
    s.metadata.emplace_back(k, std::to_string(v));
}

// Emit one pulse worth of photons for the HBT generator. Draw order per
// photon: delay, route, detect, then jitter only for retained photons.
void emit_pulse(const PulseTrainConfig& cfg, double pulse_ps, Rng& rng,
                std::uint64_t duration_ps,
                std::vector<std::vector<std::uint64_t>>& channels) {
    const double u = rng.uniform();
    int n_photons = 0;
    if (u < cfg.p_double)
        n_photons = 2;
    else if (u < cfg.p_emit)
        n_photons = 1;
    for (int k = 0; k < n_photons; ++k) {
        const double delay_ps = rng.exponential(cfg.t1_ns) * 1000.0;
        const std::size_t ch = rng.uniform() < 0.5 ? 0 : 1;
        const bool kept = rng.uniform() < cfg.detector_efficiency[ch];
        if (!kept) continue;
        double t = pulse_ps + delay_ps;
        if (cfg.jitter_sigma_ps > 0.0) t = rng.gaussian(t, cfg.jitter_sigma_ps);
        const double floored = std::floor(t);
        if (floored < 0.0 || floored > static_cast<double>(duration_ps)) continue;
        channels[ch].push_back(static_cast<std::uint64_t>(floored));
    }
}

void add_dark_counts(const PulseTrainConfig& cfg, std::uint64_t duration_ps,
                     std::vector<std::vector<std::uint64_t>>& channels) {
    if (cfg.dark_rate_hz <= 0.0) return;
    const double mean_interval_ps = 1e12 / cfg.dark_rate_hz;
    for (std::size_t ch = 0; ch < channels.size(); ++ch) {
        Rng rng(cfg.seed, kDarkStreamBase + ch);
        double t = rng.exponential(mean_interval_ps);
        while (t <= static_cast<double>(duration_ps)) {
            channels[ch].push_back(static_cast<std::uint64_t>(std::floor(t)));
            t += rng.exponential(mean_interval_ps);
        }
    }
}

void sort_channels(ClickStream& s) {
    for (auto& c : s.channels) std::sort(c.begin(), c.end());
}

}  // namespace

void PulseTrainConfig::validate() const {
    if (!(rep_period_ps > 0.0))
        throw UsageError("PulseTrainConfig: rep_period must be > 0");
    if (!(p_double >= 0.0 && p_double <= p_emit && p_emit <= 1.0))
        throw UsageError("PulseTrainConfig: need 0 <= p_double <= p_emit <= 1");
    if (!(t1_ns > 0.0)) throw UsageError("PulseTrainConfig: t1 must be > 0");
    for (double e : detector_efficiency)
        if (!(e >= 0.0 && e <= 1.0))
            throw UsageError("PulseTrainConfig: efficiency must be in [0, 1]");
    if (!(dark_rate_hz >= 0.0))
        throw UsageError("PulseTrainConfig: dark rate must be >= 0");
    if (!(jitter_sigma_ps >= 0.0))
        throw UsageError("PulseTrainConfig: jitter sigma must be >= 0");
}

void CascadeConfig::validate() const {
    if (!(rep_period_ps > 0.0))
        throw UsageError("CascadeConfig: rep_period must be > 0");
    if (!(p_xx >= 0.0 && p_x_only >= 0.0 && p_xx + p_x_only <= 1.0))
        throw UsageError("CascadeConfig: need p_xx, p_x_only >= 0 and sum <= 1");
    if (!(tau_xx_ns > 0.0 && tau_x_ns > 0.0))
        throw UsageError("CascadeConfig: lifetimes must be > 0");
    for (double e : efficiency)
        if (!(e >= 0.0 && e <= 1.0))
            throw UsageError("CascadeConfig: efficiency must be in [0, 1]");
}

void BlinkingConfig::validate() const {
    if (!(on_dwell_ns > 0.0 && off_dwell_ns > 0.0))
        throw UsageError("BlinkingConfig: dwell times must be > 0");
    base.validate();
}

ClickStream simulate_hbt(const PulseTrainConfig& config) {
    config.validate();
    ClickStream stream;
    stream.channels.resize(2);
    stream.duration_ps = static_cast<std::uint64_t>(
        std::llround(config.rep_period_ps * static_cast<double>(config.n_pulses)));

    Rng rng(config.seed, kEmissionStream);
    for (std::uint64_t i = 0; i < config.n_pulses; ++i) {
        const double pulse_ps = static_cast<double>(i) * config.rep_period_ps;
        emit_pulse(config, pulse_ps, rng, stream.duration_ps, stream.channels);
    }
    add_dark_counts(config, stream.duration_ps, stream.channels);
    sort_channels(stream);

    stream.metadata.emplace_back("kind", "hbt");
    append_meta(stream, "rep_period_ps", config.rep_period_ps);
    append_meta(stream, "n_pulses", config.n_pulses);
    append_meta(stream, "p_emit", config.p_emit);
    append_meta(stream, "p_double", config.p_double);
    append_meta(stream, "t1_ns", config.t1_ns);
    append_meta(stream, "efficiency_a", config.detector_efficiency[0]);
    append_meta(stream, "efficiency_b", config.detector_efficiency[1]);
    append_meta(stream, "dark_rate_hz", config.dark_rate_hz);
    append_meta(stream, "jitter_sigma_ps", config.jitter_sigma_ps);
    append_meta(stream, "seed", config.seed);
    return stream;
}

ClickStream simulate_cascade(const CascadeConfig& config) {
    config.validate();
    ClickStream stream;
    stream.channels.resize(2);
    stream.duration_ps = static_cast<std::uint64_t>(
        std::llround(config.rep_period_ps * static_cast<double>(config.n_pulses)));

    Rng rng(config.seed, kEmissionStream);
    for (std::uint64_t i = 0; i < config.n_pulses; ++i) {
        const double pulse_ps = static_cast<double>(i) * config.rep_period_ps;
        const double u = rng.uniform();
        double t_x_ps = -1.0;
        if (u < config.p_xx) {
            const double t_xx_ps = pulse_ps + rng.exponential(config.tau_xx_ns) * 1000.0;
            const bool keep_xx = rng.uniform() < config.efficiency[0];
            t_x_ps = t_xx_ps + rng.exponential(config.tau_x_ns) * 1000.0;
            if (keep_xx && t_xx_ps >= 0.0 &&
                t_xx_ps <= static_cast<double>(stream.duration_ps))
                stream.channels[0].push_back(
                    static_cast<std::uint64_t>(std::floor(t_xx_ps)));
        } else if (u < config.p_xx + config.p_x_only) {
            t_x_ps = pulse_ps + rng.exponential(config.tau_x_ns) * 1000.0;
        }
        if (t_x_ps >= 0.0) {
            const bool keep_x = rng.uniform() < config.efficiency[1];
            if (keep_x && t_x_ps <= static_cast<double>(stream.duration_ps))
                stream.channels[1].push_back(
                    static_cast<std::uint64_t>(std::floor(t_x_ps)));
        }
    }
    sort_channels(stream);

    stream.metadata.emplace_back("kind", "cascade");
    append_meta(stream, "rep_period_ps", config.rep_period_ps);
    append_meta(stream, "n_pulses", config.n_pulses);
    append_meta(stream, "p_xx", config.p_xx);
    append_meta(stream, "p_x_only", config.p_x_only);
    append_meta(stream, "tau_xx_ns", config.tau_xx_ns);
    append_meta(stream, "tau_x_ns", config.tau_x_ns);
    append_meta(stream, "efficiency_xx", config.efficiency[0]);
    append_meta(stream, "efficiency_x", config.efficiency[1]);
    append_meta(stream, "seed", config.seed);
    return stream;
}

ClickStream simulate_blinking(const BlinkingConfig& config) {
    config.validate();
    const PulseTrainConfig& base = config.base;
    ClickStream stream;
    stream.channels.resize(2);
    stream.duration_ps = static_cast<std::uint64_t>(
        std::llround(base.rep_period_ps * static_cast<double>(base.n_pulses)));

    Rng telegraph(base.seed, kTelegraphStream);
    const double p_on =
        config.on_dwell_ns / (config.on_dwell_ns + config.off_dwell_ns);
    bool on = telegraph.uniform() < p_on;
    double next_switch_ps =
        telegraph.exponential(on ? config.on_dwell_ns : config.off_dwell_ns) * 1000.0;

    Rng rng(base.seed, kEmissionStream);
    for (std::uint64_t i = 0; i < base.n_pulses; ++i) {
        const double pulse_ps = static_cast<double>(i) * base.rep_period_ps;
        while (next_switch_ps <= pulse_ps) {
            on = !on;
            next_switch_ps += telegraph.exponential(
                                  on ? config.on_dwell_ns : config.off_dwell_ns) *
                              1000.0;
        }
        if (on) emit_pulse(base, pulse_ps, rng, stream.duration_ps, stream.channels);
    }
    add_dark_counts(base, stream.duration_ps, stream.channels);
    sort_channels(stream);

    stream.metadata.emplace_back("kind", "blinking");
    append_meta(stream, "on_dwell_ns", config.on_dwell_ns);
    append_meta(stream, "off_dwell_ns", config.off_dwell_ns);
    append_meta(stream, "rep_period_ps", base.rep_period_ps);
    append_meta(stream, "n_pulses", base.n_pulses);
    append_meta(stream, "p_emit", base.p_emit);
    append_meta(stream, "p_double", base.p_double);
    append_meta(stream, "t1_ns", base.t1_ns);
    append_meta(stream, "efficiency_a", base.detector_efficiency[0]);
    append_meta(stream, "efficiency_b", base.detector_efficiency[1]);
    append_meta(stream, "dark_rate_hz", base.dark_rate_hz);
    append_meta(stream, "jitter_sigma_ps", base.jitter_sigma_ps);
    append_meta(stream, "seed", base.seed);
    return stream;
}

CorrelationHistogram correlate(const ClickStream& stream, std::size_t chan_a,
                               std::size_t chan_b, std::int64_t bin_width_ps,
                               std::int64_t range_ps) {
    if (chan_a >= stream.channels.size() || chan_b >= stream.channels.size())
        throw UsageError("correlate: channel index out of range");
    if (!(bin_width_ps > 0 && range_ps > 0))
        throw UsageError("correlate: bin width and range must be > 0");
    if ((2 * range_ps) % bin_width_ps != 0)
        throw UsageError("correlate: bin width must divide the full span");

    const auto& a = stream.channels[chan_a];
    const auto& b = stream.channels[chan_b];
    CorrelationHistogram hist;
    hist.bin_width_ps = bin_width_ps;
    hist.range_ps = range_ps;
    hist.counts.assign(static_cast<std::size_t>(2 * range_ps / bin_width_ps), 0);
    hist.total_starts = a.size();
    hist.total_stops = b.size();
    const auto n_bins = static_cast<std::int64_t>(hist.counts.size());

    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto t_a = static_cast<std::int64_t>(a[i]);
        const std::int64_t lo = t_a - range_ps;
        const std::int64_t hi = t_a + range_ps;
        auto it = std::lower_bound(b.begin(), b.end(),
                                   lo < 0 ? 0u : static_cast<std::uint64_t>(lo));
        for (; it != b.end(); ++it) {
            const auto t_b = static_cast<std::int64_t>(*it);
            if (t_b > hi) break;
            if (chan_a == chan_b &&
                static_cast<std::size_t>(it - b.begin()) == i)
                continue;
            std::int64_t idx = (t_b - t_a + range_ps) / bin_width_ps;
            if (idx == n_bins) idx = n_bins - 1;  // inclusive upper edge
            ++hist.counts[static_cast<std::size_t>(idx)];
        }
    }
    return hist;
}

double expected_g2_center(const PulseTrainConfig& config) {
    config.validate();
    if (config.dark_rate_hz != 0.0)
        throw UsageError("expected_g2_center: requires zero dark-count rate");

    const double q[3] = {1.0 - config.p_emit, config.p_emit - config.p_double,
                         config.p_double};
    const double eff_a = config.detector_efficiency[0];
    const double eff_b = config.detector_efficiency[1];

    double e_na = 0.0, e_nb = 0.0, e_nanb = 0.0;
    for (int n = 0; n <= 2; ++n) {
        const int n_routes = 1 << n;
        for (int route = 0; route < n_routes; ++route) {
            const double p_route = q[n] / static_cast<double>(n_routes);
            // Enumerate detection outcomes per photon.
            const int n_det = 1 << n;
            for (int det = 0; det < n_det; ++det) {
                double p = p_route;
                int na = 0, nb = 0;
                for (int k = 0; k < n; ++k) {
                    const bool to_a = ((route >> k) & 1) == 0;
                    const bool kept = ((det >> k) & 1) == 1;
                    const double eff = to_a ? eff_a : eff_b;
                    p *= kept ? eff : (1.0 - eff);
                    if (kept) (to_a ? na : nb) += 1;
                }
                e_na += p * na;
                e_nb += p * nb;
                e_nanb += p * na * nb;
            }
        }
    }
    if (e_nanb == 0.0) return 0.0;
    return e_nanb / (e_na * e_nb);
}

}  // namespace eml
