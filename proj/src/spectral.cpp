#include "spectral.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace motorbnn {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

void fft_inplace(std::vector<std::complex<double>>& values) {
    const std::size_t n = values.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        fail(ErrorKind::invalid_argument, "FFT size must be a power of two");
    }
    if (n == 1) {
        return;
    }

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(values[i], values[j]);
        }
    }

    // each twiddle computed directly from its angle, not by recurrence,
    // keeping rounding error independent of n
    std::vector<std::complex<double>> twiddle(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        twiddle[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) /
                                         static_cast<double>(n));
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        const std::size_t half = len / 2;
        for (std::size_t block = 0; block < n; block += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const auto odd = values[block + k + half] * twiddle[k * stride];
                values[block + k + half] = values[block + k] - odd;
                values[block + k] += odd;
            }
        }
    }
}

Spectrum fft_magnitude(const Segment& segment) {
    if (segment.samples.empty()) {
        fail(ErrorKind::empty_signal, "cannot transform an empty segment");
    }
    const std::size_t n = next_pow2(segment.samples.size());
    std::vector<std::complex<double>> buffer(n);
    std::transform(segment.samples.begin(), segment.samples.end(), buffer.begin(),
                   [](double s) { return std::complex<double>(s, 0.0); });
    fft_inplace(buffer);

    const std::size_t half = n / 2;
    Spectrum spectrum;
    spectrum.freqs.resize(half + 1);
    spectrum.mags.resize(half + 1);
    const double bin_hz = static_cast<double>(segment.sample_rate) / static_cast<double>(n);
    for (std::size_t k = 0; k <= half; ++k) {
        spectrum.freqs[k] = bin_hz * static_cast<double>(k);
        const double scale = (k == 0 || k == half) ? 1.0 : 2.0;
        spectrum.mags[k] = scale / static_cast<double>(n) * std::abs(buffer[k]);
    }
    return spectrum;
}

Spectrum band_limit(const Spectrum& spectrum, double f_lo, double f_hi) {
    if (!(f_lo >= 0.0) || !(f_lo < f_hi)) {
        fail(ErrorKind::invalid_argument, "band bounds must satisfy 0 <= f_lo < f_hi");
    }
    Spectrum out;
    for (std::size_t i = 0; i < spectrum.freqs.size(); ++i) {
        const double f = spectrum.freqs[i];
        if (f >= f_lo && f <= f_hi) {
            out.freqs.push_back(f);
            out.mags.push_back(spectrum.mags[i]);
        }
    }
    if (out.freqs.empty()) {
        std::ostringstream msg;
        msg << "no spectrum bins between " << f_lo << " Hz and " << f_hi << " Hz";
        fail(ErrorKind::empty_band, msg.str());
    }
    return out;
}

std::vector<double> extract_features(const Spectrum& spectrum, std::size_t n_features) {
    if (spectrum.freqs.empty()) {
        fail(ErrorKind::empty_band, "cannot extract features from an empty spectrum");
    }
    if (n_features == 0) {
        fail(ErrorKind::invalid_argument, "n_features must be at least 1");
    }

    std::vector<double> sums(n_features, 0.0);
    // log-spaced interval edges; a DC bin is folded into the lowest interval
    const double lo = std::max(spectrum.freqs.front(), 1e-6);
    const double hi = spectrum.freqs.back();
    const double log_lo = std::log(lo);
    const double span = hi > lo ? std::log(hi) - log_lo : 0.0;
    for (std::size_t i = 0; i < spectrum.freqs.size(); ++i) {
        std::size_t idx = 0;
        if (span > 0.0) {
            const double f = std::max(spectrum.freqs[i], lo);
            const double t = (std::log(f) - log_lo) / span;
            idx = std::min(n_features - 1,
                           static_cast<std::size_t>(t * static_cast<double>(n_features)));
        }
        sums[idx] += spectrum.mags[i];
    }

    std::vector<double> features(n_features);
    std::transform(sums.begin(), sums.end(), features.begin(),
                   [](double s) { return std::log1p(s); });
    return features;
}

}  // namespace motorbnn
