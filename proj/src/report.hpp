#pragma once

#include "experiment.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace motorbnn {

struct HistogramSpec {
    std::size_t bins = 20;  // fixed-width bins over [0, 1]
};

// 2x2 table with row/column labels and per-row percentages. A test class with
// no items renders as "n/a".
std::string render_confusion(const TrialResult& result);

// Five rows (Healthy, Fault 1..4), predictor mean and standard deviation,
// 3-decimal formatting.
std::string render_table1(const ExperimentSummary& summary);

// Plot-ready CSV: header `bin_lo,bin_hi,count`.
std::string histogram_csv(const std::vector<double>& values, const HistogramSpec& spec);

// One row per trial: `trial,seed,accuracy,tn,fp,fn,tp` plus per-class
// mean/std columns.
std::string results_csv(const ExperimentSummary& summary);

std::string summary_json(const ExperimentSummary& summary);

// Writes results.csv, summary.json, table1.txt, confusion_<trial>.txt and
// hist_<class>.csv (predictions pooled across trials) into outdir.
void write_experiment_outputs(const ExperimentSummary& summary,
                              const std::filesystem::path& outdir,
                              const HistogramSpec& spec = {});

// Human-readable class names: healthy -> Healthy, fault1 -> Fault 1.
std::string display_class_name(const std::string& class_tag);

}  // namespace motorbnn
