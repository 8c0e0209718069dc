#include "spectral.hpp"
#include "errors.hpp"
#include "oracles.hpp"
#include "rng.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

using namespace motorbnn;
using oracle::naive_dft;

namespace {

double max_abs(const std::vector<std::complex<double>>& v) {
    double m = 0.0;
    for (const auto& z : v) {
        m = std::max(m, std::abs(z));
    }
    return m;
}

Segment sine_segment(double amplitude, double freq_hz, std::uint32_t sample_rate,
                     std::size_t n_samples) {
    Segment seg;
    seg.sample_rate = sample_rate;
    seg.samples.resize(n_samples);
    for (std::size_t t = 0; t < n_samples; ++t) {
        seg.samples[t] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz *
                                              static_cast<double>(t) / sample_rate);
    }
    return seg;
}

}  // namespace

TEST_CASE("fft matches the naive DFT oracle on random inputs") {
    Rng rng(20240811);
    for (std::size_t n : {2u, 8u, 64u, 256u, 1024u, 4096u}) {
        std::vector<std::complex<double>> input(n);
        for (auto& z : input) {
            z = {rng.normal(), rng.normal()};
        }
        auto fft_out = input;
        fft_inplace(fft_out);
        const auto dft_out = naive_dft(input);
        const double scale = max_abs(dft_out);
        for (std::size_t k = 0; k < n; ++k) {
            CHECK(std::abs(fft_out[k] - dft_out[k]) / scale <= 1e-9);
        }
    }
}

TEST_CASE("Parseval: sum |X_k|^2 / N equals signal energy") {
    Rng rng(7);
    for (std::size_t n : {16u, 128u, 2048u}) {
        std::vector<std::complex<double>> input(n);
        double energy = 0.0;
        for (auto& z : input) {
            z = {rng.normal(), 0.0};
            energy += std::norm(z);
        }
        auto out = input;
        fft_inplace(out);
        double spectral_energy = 0.0;
        for (const auto& z : out) {
            spectral_energy += std::norm(z);
        }
        spectral_energy /= static_cast<double>(n);
        CHECK(std::abs(spectral_energy - energy) / energy <= 1e-9);
    }
}

TEST_CASE("fft_inplace rejects non-power-of-two sizes") {
    std::vector<std::complex<double>> values(12);
    CHECK_THROWS_AS(fft_inplace(values), Error);
}

TEST_CASE("all-zero segment gives an all-zero spectrum") {
    Segment seg;
    seg.sample_rate = 1000;
    seg.samples.assign(100, 0.0);
    const Spectrum spectrum = fft_magnitude(seg);
    for (double m : spectrum.mags) {
        CHECK(m == 0.0);
    }
}

TEST_CASE("unit sine at a bin frequency reads amplitude 1.0") {
    // 1 s at 65536 Hz: N is already a power of two, 1024 Hz is bin 1024
    const Segment seg = sine_segment(1.0, 1024.0, 65536, 65536);
    const Spectrum spectrum = fft_magnitude(seg);
    REQUIRE(spectrum.freqs.size() == 65536 / 2 + 1);
    for (std::size_t k = 0; k < spectrum.freqs.size(); ++k) {
        if (k == 1024) {
            CHECK(std::abs(spectrum.mags[k] - 1.0) <= 1e-9);
        } else {
            CHECK(spectrum.mags[k] <= 1e-9);
        }
    }
    CHECK(spectrum.freqs[1024] == doctest::Approx(1024.0));
}

TEST_CASE("two equal-amplitude sines give two equal peaks") {
    Segment seg = sine_segment(0.5, 100.0, 4096, 4096);
    const Segment second = sine_segment(0.5, 300.0, 4096, 4096);
    for (std::size_t t = 0; t < seg.samples.size(); ++t) {
        seg.samples[t] += second.samples[t];
    }
    const Spectrum spectrum = fft_magnitude(seg);
    CHECK(std::abs(spectrum.mags[100] - 0.5) <= 1e-9);
    CHECK(std::abs(spectrum.mags[300] - 0.5) <= 1e-9);
    CHECK(std::abs(spectrum.mags[100] - spectrum.mags[300]) <= 1e-9);
}

TEST_CASE("zero-padding keeps the bin grid consistent with the padded size") {
    Segment seg = sine_segment(0.3, 50.0, 1000, 600);  // pads to 1024
    const Spectrum spectrum = fft_magnitude(seg);
    REQUIRE(spectrum.freqs.size() == 513);
    CHECK(spectrum.freqs[1] == doctest::Approx(1000.0 / 1024.0));
    CHECK(spectrum.freqs.back() == doctest::Approx(500.0));
}

TEST_CASE("band_limit") {
    Spectrum spectrum;
    for (int k = 0; k <= 22050; k += 5) {
        spectrum.freqs.push_back(k);
        spectrum.mags.push_back(1.0);
    }

    SUBCASE("defaults keep 16 Hz .. 20 kHz") {
        const Spectrum banded = band_limit(spectrum);
        CHECK(banded.freqs.front() >= 16.0);
        CHECK(banded.freqs.back() <= 20000.0);
        CHECK(banded.freqs.front() == 20.0);
        CHECK(banded.freqs.back() == 20000.0);
    }
    SUBCASE("full range is the identity") {
        const Spectrum banded =
            band_limit(spectrum, 0.0, std::numeric_limits<double>::infinity());
        CHECK(banded.freqs == spectrum.freqs);
        CHECK(banded.mags == spectrum.mags);
    }
    SUBCASE("band above Nyquist is an empty-band error") {
        try {
            band_limit(spectrum, 30000.0, 40000.0);
            FAIL("expected an empty-band error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::empty_band);
        }
    }
    SUBCASE("idempotent with the same bounds") {
        const Spectrum once = band_limit(spectrum, 100.0, 5000.0);
        const Spectrum twice = band_limit(once, 100.0, 5000.0);
        CHECK(once.freqs == twice.freqs);
        CHECK(once.mags == twice.mags);
    }
    SUBCASE("invalid bounds") {
        CHECK_THROWS_AS(band_limit(spectrum, -1.0, 100.0), Error);
        CHECK_THROWS_AS(band_limit(spectrum, 100.0, 100.0), Error);
    }
}

TEST_CASE("extract_features") {
    SUBCASE("all-zero spectrum gives all-zero features") {
        Spectrum spectrum;
        for (int k = 1; k <= 100; ++k) {
            spectrum.freqs.push_back(10.0 * k);
            spectrum.mags.push_back(0.0);
        }
        const auto features = extract_features(spectrum, 5);
        REQUIRE(features.size() == 5);
        for (double f : features) {
            CHECK(f == 0.0);
        }
    }
    SUBCASE("n_features=1 collapses to log1p of the total magnitude") {
        Spectrum spectrum;
        double total = 0.0;
        for (int k = 1; k <= 64; ++k) {
            spectrum.freqs.push_back(20.0 * k);
            spectrum.mags.push_back(0.01 * k);
            total += 0.01 * k;
        }
        const auto features = extract_features(spectrum, 1);
        REQUIRE(features.size() == 1);
        CHECK(features[0] == doctest::Approx(std::log1p(total)).epsilon(1e-12));
    }
    SUBCASE("energy only in the lowest interval") {
        // 5 log-spaced intervals over [10, 10000]: first interval ends at
        // 10 * (1000)^(1/5) ~ 39.8 Hz
        Spectrum spectrum;
        spectrum.freqs = {10.0, 20.0, 30.0, 1000.0, 10000.0};
        spectrum.mags = {1.0, 2.0, 3.0, 0.0, 0.0};
        const auto features = extract_features(spectrum, 5);
        REQUIRE(features.size() == 5);
        CHECK(features[0] == doctest::Approx(std::log1p(6.0)).epsilon(1e-12));
        for (std::size_t j = 1; j < 5; ++j) {
            CHECK(features[j] == 0.0);
        }
    }
    SUBCASE("monotone in a band's total magnitude") {
        Spectrum lo;
        Spectrum hi;
        for (int k = 1; k <= 50; ++k) {
            lo.freqs.push_back(50.0 * k);
            hi.freqs.push_back(50.0 * k);
            lo.mags.push_back(0.1);
            hi.mags.push_back(0.1 + (k % 7 == 0 ? 0.5 : 0.0));
        }
        const auto f_lo = extract_features(lo, 4);
        const auto f_hi = extract_features(hi, 4);
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(f_hi[j] >= f_lo[j]);
        }
    }
    SUBCASE("feature count preserved and every bin lands in exactly one interval") {
        Spectrum spectrum;
        for (int k = 1; k <= 333; ++k) {
            spectrum.freqs.push_back(7.0 * k);
            spectrum.mags.push_back(0.25);
        }
        const auto features = extract_features(spectrum, 7);
        REQUIRE(features.size() == 7);
        double mass = 0.0;
        for (double f : features) {
            mass += std::expm1(f);  // invert log1p
        }
        CHECK(mass == doctest::Approx(333 * 0.25).epsilon(1e-9));
    }
    SUBCASE("empty spectrum and zero features are rejected") {
        Spectrum empty;
        CHECK_THROWS_AS(extract_features(empty, 3), Error);
        Spectrum one;
        one.freqs = {100.0};
        one.mags = {1.0};
        CHECK_THROWS_AS(extract_features(one, 0), Error);
    }
}
