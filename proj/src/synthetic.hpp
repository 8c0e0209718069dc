#pragma once

#include "audio_io.hpp"

#include <cstdint>
#include <vector>

namespace motorbnn {

// Desk-scale stand-in for the motor recordings: five classes of 30 one-second
// clips built from a harmonic stack plus class-specific damage signatures.
struct SynthConfig {
    std::size_t n_per_class = 30;
    std::uint32_t sample_rate = 44100;
    double duration_seconds = 1.0;
    std::uint64_t seed = 4242;
    double base_frequency_hz = 120.0;  // motor hum fundamental
    std::size_t n_harmonics = 6;
};

// Per-class signature relative to the healthy harmonic stack:
//   healthy - clean stack, low broadband noise
//   fault1  - gear damage: sideband pairs around every harmonic
//   fault2  - 5 broken blades: amplitude modulation, raised noise floor
//   fault3  - 10 broken blades: deeper modulation, higher noise floor
//   fault4  - shifted brush (motor off): attenuated stack, dominant noise
struct ClassProfile {
    double stack_amplitude;   // amplitude of the fundamental; harmonic h gets /h
    double noise_sigma;       // broadband Gaussian noise level
    double am_depth;          // amplitude-modulation depth (0 = none)
    double sideband_fraction; // sideband amplitude relative to its harmonic
};

const ClassProfile& class_profile(const std::string& class_tag);

std::vector<SignalRecord> generate_synthetic_dataset(const SynthConfig& cfg);

std::vector<SignalRecord> generate_synthetic_dataset(std::size_t n_per_class,
                                                     std::uint32_t sample_rate,
                                                     std::uint64_t seed);

}  // namespace motorbnn
