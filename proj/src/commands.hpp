#pragma once

#include "run_config.hpp"
#include "snapshot.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace motorbnn {

// Feature dump: header `source_id,segment,class,label,f1..fn`, one row per
// segment, pre-standardization values.
std::string features_csv(const std::vector<LabeledFeatures>& features, std::size_t n_features);

void cmd_features(const RunConfig& cfg, const std::filesystem::path& manifest,
                  const std::filesystem::path& out_csv);

// Loads the manifest, or generates the synthetic dataset when absent.
std::vector<SignalRecord> load_records(const RunConfig& cfg,
                                       const std::optional<std::filesystem::path>& manifest);

struct TrainOutput {
    TrialResult trial;
    ModelSnapshot snapshot;
};

// One split + inference; writes the chain snapshot and, when requested, a
// rendered trial report.
TrainOutput cmd_train(const RunConfig& cfg,
                      const std::optional<std::filesystem::path>& manifest,
                      const std::filesystem::path& out_snapshot,
                      const std::optional<std::filesystem::path>& out_report);

ExperimentSummary cmd_experiment(const RunConfig& cfg,
                                 const std::optional<std::filesystem::path>& manifest,
                                 const std::filesystem::path& outdir);

// Writes `<class>_<index>.wav` files plus manifest.txt; returns the manifest path.
std::filesystem::path cmd_synth(const RunConfig& cfg, const std::filesystem::path& outdir);

struct SegmentPrediction {
    std::size_t index = 0;
    int label = 0;
    double mean = 0.0;
    double stddev = 0.0;
};

struct ClassifyOutput {
    std::vector<SegmentPrediction> segments;
    int record_label = 0;  // majority vote, tie counts as faulty
    double record_mean = 0.0;
    double record_stddev = 0.0;
};

ClassifyOutput classify_record(const ModelSnapshot& snapshot, const SignalRecord& record);

}  // namespace motorbnn
