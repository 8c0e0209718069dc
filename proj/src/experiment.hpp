#pragma once

#include "audio_io.hpp"
#include "model.hpp"
#include "sampler.hpp"
#include "spectral.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace motorbnn {

struct SpectralConfig {
    double window_seconds = 1.0;
    double band_lo_hz = kDefaultBandLoHz;
    double band_hi_hz = kDefaultBandHiHz;
    std::size_t n_features = 5;
};

// Raw (pre-standardization) feature vector for one segment.
struct LabeledFeatures {
    std::string source_id;
    std::size_t segment_index = 0;
    std::string class_tag;  // five-way class
    int label = 0;          // 0 healthy, 1 faulty
    std::vector<double> x;
};

// decode -> segment -> FFT -> band-limit -> log-band aggregation
std::vector<LabeledFeatures> featurize(const std::vector<SignalRecord>& records,
                                       const SpectralConfig& cfg);

// Per-feature standardization fitted on the training split only.
struct Normalizer {
    std::vector<double> means;
    std::vector<double> stds;  // a zero-variance feature gets std 1

    static Normalizer fit(const std::vector<LabeledFeatures>& train);
    std::vector<double> apply(const std::vector<double>& x) const;
};

struct SplitResult {
    std::vector<std::size_t> train;  // record indices
    std::vector<std::size_t> test;
    std::vector<std::string> warnings;
};

// Stratified shuffle split over records: per class, round(ratio * n) records
// go to train, capped so both parts are nonempty whenever the class has >= 2
// records. A single-record class goes to train with a warning.
SplitResult split_dataset(const std::vector<std::string>& class_by_record, double ratio,
                          std::uint64_t seed);

struct ItemPrediction {
    std::string source_id;
    std::size_t segment_index = 0;
    std::string class_tag;
    int true_label = 0;
    int predicted_label = 0;
    double mean = 0.0;
    double stddev = 0.0;
};

struct ClassStats {
    double pred_mean = 0.0;  // mean of the per-item predictive means
    double pred_std = 0.0;   // spread of the per-item predictive means
    std::size_t count = 0;
};

struct TrialResult {
    std::uint64_t seed = 0;
    double accuracy = 0.0;
    std::array<std::array<std::int64_t, 2>, 2> confusion{};  // [true][predicted]
    std::map<std::string, ClassStats> per_class_stats;
    std::vector<ItemPrediction> predictions;
    double accept_rate = 0.0;
};

struct ExperimentConfig {
    std::size_t n_trials = 100;
    double train_ratio = 0.8;
    std::uint64_t base_seed = 1234;
    double threshold = 0.5;
    std::size_t jobs = 1;
};

// Everything needed to train one posterior over the feature space.
struct BnnSetup {
    std::vector<std::size_t> hidden_layers{5};
    ModelConfig model;
    ChainConfig chain;
};

// Artifacts of one trial beyond its scored result; used for snapshots.
struct TrialArtifacts {
    TrialResult result;
    Normalizer normalizer;
    PosteriorChain chain;
    NetworkShape shape;
};

TrialArtifacts run_trial_full(const std::vector<LabeledFeatures>& features,
                              const BnnSetup& setup, const ExperimentConfig& cfg,
                              std::uint64_t seed);

TrialResult run_trial(const std::vector<LabeledFeatures>& features, const BnnSetup& setup,
                      const ExperimentConfig& cfg, std::uint64_t seed);

struct ExperimentSummary {
    std::size_t n_trials = 0;
    double mean_accuracy = 0.0;
    double accuracy_std = 0.0;
    std::array<std::array<double, 2>, 2> mean_confusion{};
    std::map<std::string, ClassStats> table;  // trial-averaged per-class stats
    std::vector<TrialResult> trials;
};

// Trial i runs with seed base_seed + i; trials may execute concurrently
// (cfg.jobs) without changing any result.
ExperimentSummary run_experiment(const std::vector<LabeledFeatures>& features,
                                 const BnnSetup& setup, const ExperimentConfig& cfg);

}  // namespace motorbnn
