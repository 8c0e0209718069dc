#include "synthetic.hpp"

#include "errors.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace motorbnn {

namespace {

constexpr double kAmFrequencyHz = 23.0;        // blade-pass modulation
constexpr double kSidebandOffsetHz = 27.0;     // gear-mesh sideband spacing
constexpr double kAmplitudeJitter = 0.05;      // per-record gain spread

// index matches kClassNames
constexpr ClassProfile kProfiles[5] = {
    // stack   noise   am    sideband
    {0.32, 0.002, 0.00, 0.0},  // healthy
    {0.30, 0.004, 0.00, 0.6},  // fault1: gear sidebands
    {0.18, 0.010, 0.45, 0.0},  // fault2: 5 broken blades
    {0.18, 0.022, 0.75, 0.0},  // fault3: 10 broken blades
    {0.05, 0.120, 0.00, 0.0},  // fault4: shifted brush, noise dominates
};

SignalRecord make_record(const SynthConfig& cfg, std::size_t class_idx, std::size_t record_idx) {
    const ClassProfile& prof = kProfiles[class_idx];
    Rng rng(mix_seed(cfg.seed, class_idx * 1000 + record_idx));

    const auto n = static_cast<std::size_t>(
        std::llround(cfg.duration_seconds * cfg.sample_rate));
    const double dt = 1.0 / cfg.sample_rate;
    const double gain = 1.0 + kAmplitudeJitter * rng.normal();

    struct Tone {
        double freq;
        double amp;
        double phase;
    };
    std::vector<Tone> tones;
    for (std::size_t h = 1; h <= cfg.n_harmonics; ++h) {
        const double fh = cfg.base_frequency_hz * static_cast<double>(h);
        const double ah = gain * prof.stack_amplitude / static_cast<double>(h);
        tones.push_back({fh, ah, 2.0 * std::numbers::pi * rng.uniform()});
        if (prof.sideband_fraction > 0.0) {
            for (double offset : {-2.0 * kSidebandOffsetHz, -kSidebandOffsetHz,
                                  kSidebandOffsetHz, 2.0 * kSidebandOffsetHz}) {
                const double fs = fh + offset;
                if (fs > 0.0) {
                    tones.push_back({fs, 0.5 * prof.sideband_fraction * ah,
                                     2.0 * std::numbers::pi * rng.uniform()});
                }
            }
        }
    }
    const double am_phase = 2.0 * std::numbers::pi * rng.uniform();

    SignalRecord record;
    record.sample_rate = cfg.sample_rate;
    record.label = kClassNames[class_idx];
    record.source_id =
        std::string(kClassNames[class_idx]) + "_" + std::to_string(record_idx);
    record.samples.resize(n);

    for (std::size_t t = 0; t < n; ++t) {
        const double time = static_cast<double>(t) * dt;
        double s = 0.0;
        for (const Tone& tone : tones) {
            s += tone.amp *
                 std::sin(2.0 * std::numbers::pi * tone.freq * time + tone.phase);
        }
        if (prof.am_depth > 0.0) {
            s *= 1.0 + prof.am_depth *
                           std::sin(2.0 * std::numbers::pi * kAmFrequencyHz * time + am_phase);
        }
        s += prof.noise_sigma * rng.normal();
        record.samples[t] = s;
    }

    // amplitudes are chosen to stay inside [-1, 1]; rescale if noise ever peaks out
    double peak = 0.0;
    for (double s : record.samples) {
        peak = std::max(peak, std::abs(s));
    }
    if (peak > 0.999) {
        const double rescale = 0.999 / peak;
        for (double& s : record.samples) {
            s *= rescale;
        }
    }
    return record;
}

}  // namespace

const ClassProfile& class_profile(const std::string& class_tag) {
    for (std::size_t i = 0; i < kClassNames.size(); ++i) {
        if (class_tag == kClassNames[i]) {
            return kProfiles[i];
        }
    }
    fail(ErrorKind::invalid_argument, "unknown class '" + class_tag + "'");
}

std::vector<SignalRecord> generate_synthetic_dataset(const SynthConfig& cfg) {
    if (cfg.n_per_class == 0) {
        fail(ErrorKind::invalid_argument, "n_per_class must be at least 1");
    }
    if (cfg.sample_rate == 0 || !(cfg.duration_seconds > 0.0)) {
        fail(ErrorKind::invalid_argument, "sample_rate and duration must be positive");
    }
    std::vector<SignalRecord> records;
    records.reserve(kClassNames.size() * cfg.n_per_class);
    for (std::size_t c = 0; c < kClassNames.size(); ++c) {
        for (std::size_t r = 0; r < cfg.n_per_class; ++r) {
            records.push_back(make_record(cfg, c, r));
        }
    }
    return records;
}

std::vector<SignalRecord> generate_synthetic_dataset(std::size_t n_per_class,
                                                     std::uint32_t sample_rate,
                                                     std::uint64_t seed) {
    SynthConfig cfg;
    cfg.n_per_class = n_per_class;
    cfg.sample_rate = sample_rate;
    cfg.seed = seed;
    return generate_synthetic_dataset(cfg);
}

}  // namespace motorbnn
