#pragma once

#include "audio_io.hpp"

#include <complex>
#include <vector>

namespace motorbnn {

inline constexpr double kDefaultBandLoHz = 16.0;
inline constexpr double kDefaultBandHiHz = 20000.0;

// One-sided amplitude spectrum of a segment.
struct Spectrum {
    std::vector<double> freqs;  // Hz, strictly increasing
    std::vector<double> mags;   // >= 0, same length as freqs
};

std::size_t next_pow2(std::size_t n);

// In-place iterative radix-2 FFT; size must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& values);

// Zero-pads to the next power of two N and returns bins 0..N/2 with
// freqs[k] = k * sample_rate / N. Amplitudes use the one-sided convention:
// (2/N)|X_k| for interior bins, (1/N)|X_k| at DC and Nyquist, so a unit sine
// at a bin frequency reads 1.0.
Spectrum fft_magnitude(const Segment& segment);

// Keeps exactly the bins with f_lo <= freq <= f_hi.
Spectrum band_limit(const Spectrum& spectrum,
                    double f_lo = kDefaultBandLoHz,
                    double f_hi = kDefaultBandHiHz);

// Splits the band into n_features contiguous log-spaced frequency intervals
// and returns log(1 + sum of magnitudes) per interval. Standardization is a
// separate step (see Normalizer in experiment.hpp).
std::vector<double> extract_features(const Spectrum& spectrum, std::size_t n_features);

}  // namespace motorbnn
