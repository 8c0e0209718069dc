#pragma once

#include "experiment.hpp"

#include <filesystem>
#include <optional>

namespace motorbnn {

// Everything needed to score a new recording: the feature pipeline settings,
// the training-split normalizer, and the posterior chain (or a single MAP
// weight vector).
struct ModelSnapshot {
    NetworkShape shape;
    ModelConfig model;
    SpectralConfig spectral;
    Normalizer normalizer;
    double threshold = 0.5;
    PosteriorChain chain;                     // empty when map_w is set
    std::optional<std::vector<double>> map_w;
};

void save_snapshot(const ModelSnapshot& snapshot, const std::filesystem::path& path);
ModelSnapshot load_snapshot(const std::filesystem::path& path);

// Predictive summary for one standardized feature vector, averaging over the
// chain (or evaluating the MAP weights).
PredictiveSummary snapshot_predict(const ModelSnapshot& snapshot, std::span<const double> x);

}  // namespace motorbnn
