#include "grmssvdd/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "grmssvdd/rng.hpp"

namespace grmssvdd {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::string event_id(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "event_%04d", index);
    return buf;
}

}  // namespace

AnomalyShape anomaly_shape_from(const std::string& name) {
    if (name == "step") return AnomalyShape::Step;
    if (name == "damped_oscillation") return AnomalyShape::DampedOscillation;
    if (name == "dropout") return AnomalyShape::Dropout;
    throw InvalidInput("unknown anomaly shape: " + name);
}

std::string to_string(AnomalyShape shape) {
    switch (shape) {
        case AnomalyShape::Step: return "step";
        case AnomalyShape::DampedOscillation: return "damped_oscillation";
        case AnomalyShape::Dropout: return "dropout";
    }
    return "unknown";
}

void SynthConfig::validate() const {
    if (n_events < 1) throw InvalidInput("synth: n_events must be >= 1");
    if (channels_per_modality.empty())
        throw InvalidInput("synth: at least one modality required");
    for (int c : channels_per_modality)
        if (c < 1) throw InvalidInput("synth: every modality needs >= 1 channel");
    if (n_timesteps < 1) throw InvalidInput("synth: n_timesteps must be >= 1");
    if (!(dt > 0.0)) throw InvalidInput("synth: dt must be > 0");
    if (magnitude < 0.0) throw InvalidInput("synth: magnitude must be >= 0");
    if (!(affected_fraction > 0.0 && affected_fraction <= 1.0))
        throw InvalidInput("synth: affected_fraction must be in (0, 1]");
    if (!(start_min_frac >= 0.0 && start_min_frac <= start_max_frac &&
          start_max_frac < 1.0))
        throw InvalidInput("synth: bad event start placement");
    if (!(len_min_frac > 0.0 && len_min_frac <= len_max_frac && len_max_frac <= 1.0))
        throw InvalidInput("synth: bad event length placement");
}

std::vector<EventSeries> generate(const SynthConfig& config) {
    config.validate();

    const int n_channels = std::accumulate(config.channels_per_modality.begin(),
                                           config.channels_per_modality.end(), 0);
    std::vector<int> modality_of_channel;
    for (std::size_t m = 0; m < config.channels_per_modality.size(); ++m)
        for (int c = 0; c < config.channels_per_modality[m]; ++c)
            modality_of_channel.push_back(static_cast<int>(m));

    const int n = config.n_timesteps;

    // Affected subset per modality, drawn once per generate() call so every
    // event perturbs the same channels. At least one channel per modality.
    std::vector<char> affected(static_cast<std::size_t>(n_channels), 0);
    {
        Rng mask_rng(config.seed ^ 0xc2b2ae3d27d4eb4fULL);
        int base = 0;
        for (int nc : config.channels_per_modality) {
            const int take = std::max(
                1, static_cast<int>(std::llround(config.affected_fraction * nc)));
            std::vector<int> idx(static_cast<std::size_t>(nc));
            std::iota(idx.begin(), idx.end(), base);
            mask_rng.shuffle(idx);
            for (int j = 0; j < take; ++j)
                affected[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])] = 1;
            base += nc;
        }
    }

    std::vector<EventSeries> events;
    events.reserve(static_cast<std::size_t>(config.n_events));

    for (int e = 0; e < config.n_events; ++e) {
        Rng rng(config.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(e + 1));

        EventSeries ev;
        ev.id = event_id(e);
        ev.event_class = to_string(config.shape);
        ev.modality_of_channel = modality_of_channel;
        ev.timestamps.resize(static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t) ev.timestamps[static_cast<std::size_t>(t)] = t * config.dt;

        ev.channels.resize(n_channels, n);
        const double span = (n - 1) * config.dt;
        for (int c = 0; c < n_channels; ++c) {
            const double offset = 1.0 + rng.uniform();
            const double amp1 = 0.05 + 0.10 * rng.uniform();
            const double amp2 = 0.05 + 0.10 * rng.uniform();
            const double freq1 = (0.5 + 1.5 * rng.uniform()) / std::max(span, config.dt);
            const double freq2 = (2.0 + 2.0 * rng.uniform()) / std::max(span, config.dt);
            const double phase1 = kTwoPi * rng.uniform();
            const double phase2 = kTwoPi * rng.uniform();
            for (int t = 0; t < n; ++t) {
                const double time = ev.timestamps[static_cast<std::size_t>(t)];
                ev.channels(c, t) = offset + amp1 * std::sin(kTwoPi * freq1 * time + phase1) +
                                    amp2 * std::sin(kTwoPi * freq2 * time + phase2) +
                                    0.05 * rng.normal();
            }
        }

        // Event interval, chosen on the timestep grid.
        const int start_lo =
            std::clamp(static_cast<int>(std::floor(config.start_min_frac * n)), 0,
                       std::max(0, n - 2));
        const int start_hi =
            std::clamp(static_cast<int>(std::floor(config.start_max_frac * n)), start_lo,
                       std::max(0, n - 2));
        const int i1 = start_lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(
                                      start_hi - start_lo + 1)));
        const int len_lo = std::max(1, static_cast<int>(std::floor(config.len_min_frac * n)));
        const int len_hi = std::max(len_lo, static_cast<int>(std::floor(config.len_max_frac * n)));
        const int len = len_lo + static_cast<int>(rng.below(
                                     static_cast<std::uint64_t>(len_hi - len_lo + 1)));
        const int i2 = std::min(i1 + len, n - 1);
        ev.tau1 = ev.timestamps[static_cast<std::size_t>(i1)];
        ev.tau2 = ev.timestamps[static_cast<std::size_t>(i2)];

        const double event_span = std::max(ev.tau2 - ev.tau1, config.dt);
        for (int c = 0; c < n_channels; ++c) {
            if (!affected[static_cast<std::size_t>(c)]) continue;
            const auto row = ev.channels.row(c);
            const double mean = row.mean();
            const double sd = std::sqrt((row.array() - mean).square().mean());
            for (int t = i1; t <= i2; ++t) {
                const double rel = (ev.timestamps[static_cast<std::size_t>(t)] - ev.tau1) / event_span;
                double& x = ev.channels(c, t);
                switch (config.shape) {
                    case AnomalyShape::Step:
                        x += config.magnitude * sd;
                        break;
                    case AnomalyShape::DampedOscillation:
                        x += config.magnitude * sd * std::exp(-3.0 * rel) *
                             std::cos(kTwoPi * 5.0 * rel);
                        break;
                    case AnomalyShape::Dropout:
                        x /= 1.0 + config.magnitude;
                        break;
                }
            }
        }

        ev.validate();
        events.push_back(std::move(ev));
    }
    return events;
}

}  // namespace grmssvdd
