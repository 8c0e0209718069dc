#include "experiment.hpp"

#include "errors.hpp"
#include "rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

namespace motorbnn {

std::vector<LabeledFeatures> featurize(const std::vector<SignalRecord>& records,
                                       const SpectralConfig& cfg) {
    std::vector<LabeledFeatures> features;
    for (const auto& record : records) {
        for (const auto& seg : segment(record, cfg.window_seconds)) {
            const Spectrum banded =
                band_limit(fft_magnitude(seg), cfg.band_lo_hz, cfg.band_hi_hz);
            LabeledFeatures item;
            item.source_id = record.source_id;
            item.segment_index = seg.index;
            item.class_tag = record.label;
            item.label = binary_label(record.label);
            item.x = extract_features(banded, cfg.n_features);
            features.push_back(std::move(item));
        }
    }
    return features;
}

Normalizer Normalizer::fit(const std::vector<LabeledFeatures>& train) {
    if (train.empty()) {
        fail(ErrorKind::invalid_argument, "cannot fit a normalizer on an empty split");
    }
    const std::size_t dim = train.front().x.size();
    Normalizer norm;
    norm.means.assign(dim, 0.0);
    norm.stds.assign(dim, 0.0);
    for (const auto& item : train) {
        if (item.x.size() != dim) {
            fail(ErrorKind::shape_mismatch, "inconsistent feature dimensions");
        }
        for (std::size_t d = 0; d < dim; ++d) {
            norm.means[d] += item.x[d];
        }
    }
    for (double& m : norm.means) {
        m /= static_cast<double>(train.size());
    }
    for (const auto& item : train) {
        for (std::size_t d = 0; d < dim; ++d) {
            const double r = item.x[d] - norm.means[d];
            norm.stds[d] += r * r;
        }
    }
    for (double& s : norm.stds) {
        s = std::sqrt(s / static_cast<double>(train.size()));
        if (!(s > 0.0)) {
            s = 1.0;
        }
    }
    return norm;
}

std::vector<double> Normalizer::apply(const std::vector<double>& x) const {
    if (x.size() != means.size()) {
        fail(ErrorKind::shape_mismatch, "feature dimension does not match the normalizer");
    }
    std::vector<double> out(x.size());
    for (std::size_t d = 0; d < x.size(); ++d) {
        out[d] = (x[d] - means[d]) / stds[d];
    }
    return out;
}

SplitResult split_dataset(const std::vector<std::string>& class_by_record, double ratio,
                          std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) {
        fail(ErrorKind::invalid_argument, "split ratio must be in (0, 1)");
    }
    if (class_by_record.empty()) {
        fail(ErrorKind::invalid_argument, "cannot split an empty dataset");
    }

    // classes in canonical order first, then any others by first appearance
    std::vector<std::string> class_order;
    for (const char* name : kClassNames) {
        if (std::find(class_by_record.begin(), class_by_record.end(), name) !=
            class_by_record.end()) {
            class_order.emplace_back(name);
        }
    }
    for (const auto& tag : class_by_record) {
        if (std::find(class_order.begin(), class_order.end(), tag) == class_order.end()) {
            class_order.push_back(tag);
        }
    }

    SplitResult result;
    Rng rng(mix_seed(seed, 0));
    for (const auto& tag : class_order) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < class_by_record.size(); ++i) {
            if (class_by_record[i] == tag) {
                members.push_back(i);
            }
        }
        // Fisher-Yates
        for (std::size_t i = members.size(); i > 1; --i) {
            std::swap(members[i - 1], members[rng.below(i)]);
        }
        const std::size_t n = members.size();
        std::size_t n_train;
        if (n < 2) {
            n_train = n;
            result.warnings.push_back("class '" + tag +
                                      "' has fewer than 2 records; all assigned to train");
        } else {
            const auto rounded =
                static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
            n_train = std::clamp<std::size_t>(rounded, 1, n - 1);
        }
        for (std::size_t i = 0; i < n; ++i) {
            (i < n_train ? result.train : result.test).push_back(members[i]);
        }
    }
    std::sort(result.train.begin(), result.train.end());
    std::sort(result.test.begin(), result.test.end());
    return result;
}

namespace {

// records in first-appearance order, with their class tags
struct RecordIndex {
    std::vector<std::string> ids;
    std::vector<std::string> classes;
    std::vector<std::vector<std::size_t>> feature_rows;  // per record
};

RecordIndex index_records(const std::vector<LabeledFeatures>& features) {
    RecordIndex index;
    std::map<std::string, std::size_t> seen;
    for (std::size_t row = 0; row < features.size(); ++row) {
        const auto& item = features[row];
        auto it = seen.find(item.source_id);
        if (it == seen.end()) {
            it = seen.emplace(item.source_id, index.ids.size()).first;
            index.ids.push_back(item.source_id);
            index.classes.push_back(item.class_tag);
            index.feature_rows.emplace_back();
        }
        index.feature_rows[it->second].push_back(row);
    }
    return index;
}

ClassStats stats_of(const std::vector<double>& values) {
    ClassStats stats;
    stats.count = values.size();
    if (values.empty()) {
        return stats;
    }
    for (double v : values) {
        stats.pred_mean += v;
    }
    stats.pred_mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double var = 0.0;
        for (double v : values) {
            var += (v - stats.pred_mean) * (v - stats.pred_mean);
        }
        stats.pred_std = std::sqrt(var / static_cast<double>(values.size() - 1));
    }
    return stats;
}

}  // namespace

TrialArtifacts run_trial_full(const std::vector<LabeledFeatures>& features,
                              const BnnSetup& setup, const ExperimentConfig& cfg,
                              std::uint64_t seed) {
    if (features.empty()) {
        fail(ErrorKind::invalid_argument, "no features to train on");
    }
    const std::size_t dim = features.front().x.size();

    const RecordIndex index = index_records(features);
    const SplitResult split = split_dataset(index.classes, cfg.train_ratio, seed);

    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    for (std::size_t rec : split.train) {
        train_rows.insert(train_rows.end(), index.feature_rows[rec].begin(),
                          index.feature_rows[rec].end());
    }
    for (std::size_t rec : split.test) {
        test_rows.insert(test_rows.end(), index.feature_rows[rec].begin(),
                         index.feature_rows[rec].end());
    }
    if (train_rows.empty() || test_rows.empty()) {
        fail(ErrorKind::invalid_argument, "split left an empty train or test set");
    }

    std::vector<LabeledFeatures> train_features;
    train_features.reserve(train_rows.size());
    for (std::size_t row : train_rows) {
        train_features.push_back(features[row]);
    }

    bool has_healthy = false;
    bool has_faulty = false;
    for (const auto& item : train_features) {
        (item.label == 0 ? has_healthy : has_faulty) = true;
    }
    if (!has_healthy || !has_faulty) {
        fail(ErrorKind::invalid_argument, "training split does not contain both classes");
    }

    TrialArtifacts artifacts;
    artifacts.normalizer = Normalizer::fit(train_features);

    Dataset train_set;
    for (const auto& item : train_features) {
        train_set.x.push_back(artifacts.normalizer.apply(item.x));
        train_set.y.push_back(item.label);
    }

    artifacts.shape.n_inputs = dim;
    artifacts.shape.hidden_layers = setup.hidden_layers;

    const NetworkParams init =
        init_from_prior(artifacts.shape, setup.model.lambda, mix_seed(seed, 1));

    NetworkParams scratch;
    scratch.shape = artifacts.shape;
    const auto log_density = [&](const std::vector<double>& w) {
        NetworkParams p{w, artifacts.shape};
        return log_joint(p, train_set, setup.model);
    };
    const auto grad = [&](const std::vector<double>& w) {
        NetworkParams p{w, artifacts.shape};
        return grad_log_joint(p, train_set, setup.model);
    };

    ChainConfig chain_cfg = setup.chain;
    chain_cfg.seed = mix_seed(seed, 2);
    artifacts.chain = sample_posterior(log_density, grad, init.w, chain_cfg);

    TrialResult& result = artifacts.result;
    result.seed = seed;
    result.accept_rate = artifacts.chain.accept_rate;

    std::map<std::string, std::vector<double>> means_by_class;
    for (std::size_t row : test_rows) {
        const auto& item = features[row];
        const std::vector<double> x = artifacts.normalizer.apply(item.x);
        const Classification cls =
            classify(artifacts.chain, artifacts.shape, x, cfg.threshold);
        result.confusion[item.label][cls.label] += 1;
        means_by_class[item.class_tag].push_back(cls.confidence.mean);
        result.predictions.push_back({item.source_id, item.segment_index, item.class_tag,
                                      item.label, cls.label, cls.confidence.mean,
                                      cls.confidence.stddev});
    }

    const auto total = static_cast<double>(test_rows.size());
    result.accuracy =
        static_cast<double>(result.confusion[0][0] + result.confusion[1][1]) / total;
    for (const auto& [tag, values] : means_by_class) {
        result.per_class_stats[tag] = stats_of(values);
    }
    return artifacts;
}

TrialResult run_trial(const std::vector<LabeledFeatures>& features, const BnnSetup& setup,
                      const ExperimentConfig& cfg, std::uint64_t seed) {
    return run_trial_full(features, setup, cfg, seed).result;
}

ExperimentSummary run_experiment(const std::vector<LabeledFeatures>& features,
                                 const BnnSetup& setup, const ExperimentConfig& cfg) {
    if (cfg.n_trials == 0) {
        fail(ErrorKind::invalid_argument, "n_trials must be at least 1");
    }

    ExperimentSummary summary;
    summary.n_trials = cfg.n_trials;
    summary.trials.resize(cfg.n_trials);

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t failed_trial = cfg.n_trials;
    std::exception_ptr error;

    const auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cfg.n_trials) {
                return;
            }
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (error) {
                    return;
                }
            }
            try {
                summary.trials[i] = run_trial(features, setup, cfg, cfg.base_seed + i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error || i < failed_trial) {
                    error = std::current_exception();
                    failed_trial = i;
                }
            }
        }
    };

    const std::size_t jobs = std::max<std::size_t>(1, cfg.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t j = 0; j < jobs; ++j) {
            threads.emplace_back(worker);
        }
        for (auto& t : threads) {
            t.join();
        }
    }
    if (error) {
        try {
            std::rethrow_exception(error);
        } catch (const Error& e) {
            fail(e.kind(), "trial " + std::to_string(failed_trial) + ": " + e.what());
        }
    }

    // aggregate in trial order
    std::map<std::string, std::vector<ClassStats>> stats_by_class;
    double acc_sum = 0.0;
    for (const auto& trial : summary.trials) {
        acc_sum += trial.accuracy;
        for (int t = 0; t < 2; ++t) {
            for (int p = 0; p < 2; ++p) {
                summary.mean_confusion[t][p] += static_cast<double>(trial.confusion[t][p]);
            }
        }
        for (const auto& [tag, stats] : trial.per_class_stats) {
            stats_by_class[tag].push_back(stats);
        }
    }
    const auto n = static_cast<double>(cfg.n_trials);
    summary.mean_accuracy = acc_sum / n;
    if (cfg.n_trials > 1) {
        double var = 0.0;
        for (const auto& trial : summary.trials) {
            var += (trial.accuracy - summary.mean_accuracy) *
                   (trial.accuracy - summary.mean_accuracy);
        }
        summary.accuracy_std = std::sqrt(var / (n - 1.0));
    }
    for (auto& row : summary.mean_confusion) {
        for (double& cell : row) {
            cell /= n;
        }
    }
    for (const auto& [tag, per_trial] : stats_by_class) {
        ClassStats agg;
        for (const auto& stats : per_trial) {
            agg.pred_mean += stats.pred_mean;
            agg.pred_std += stats.pred_std;
            agg.count += stats.count;
        }
        agg.pred_mean /= static_cast<double>(per_trial.size());
        agg.pred_std /= static_cast<double>(per_trial.size());
        summary.table[tag] = agg;
    }
    return summary;
}

}  // namespace motorbnn
