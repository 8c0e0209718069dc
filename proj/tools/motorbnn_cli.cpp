// Command-line front end; talks to the library exclusively through the C API.

#include "motorbnn.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInference = 3;
constexpr int kExitUsage = 4;

int exit_code_of(int status) {
    switch (status) {
        case MBNN_OK:
            return kExitOk;
        case MBNN_ERR_IO:
        case MBNN_ERR_FORMAT:
        case MBNN_ERR_UNSUPPORTED:
        case MBNN_ERR_EMPTY:
            return kExitInput;
        case MBNN_ERR_DIVERGENCE:
            return kExitInference;
        default:
            return kExitUsage;
    }
}

[[noreturn]] void die(int status) {
    std::cerr << "error (" << mbnn_status_name(status) << "): " << mbnn_last_error() << "\n";
    std::exit(exit_code_of(status));
}

void check(int status) {
    if (status != MBNN_OK) {
        die(status);
    }
}

using ConfigPtr = std::unique_ptr<mbnn_config, decltype(&mbnn_config_free)>;

ConfigPtr make_config(const std::string& config_path) {
    mbnn_config* cfg = nullptr;
    if (config_path.empty()) {
        check(mbnn_config_default(&cfg));
    } else {
        check(mbnn_config_load(config_path.c_str(), &cfg));
    }
    return ConfigPtr(cfg, &mbnn_config_free);
}

void set_option(mbnn_config* cfg, const char* key, const std::string& value) {
    check(mbnn_config_set(cfg, key, value.c_str()));
}

struct CommonOpts {
    std::string config_path;
    std::string manifest;
    bool synthetic = false;
};

const char* manifest_or_synthetic(const CommonOpts& opts) {
    // exactly one data source must be given
    if (opts.synthetic != opts.manifest.empty()) {
        std::cerr << "error: provide either a manifest path or --synthetic\n";
        std::exit(kExitUsage);
    }
    return opts.synthetic ? nullptr : opts.manifest.c_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acoustic fault detection for electric motors with a Bayesian neural network"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    // features
    std::string feat_manifest;
    std::string feat_config;
    std::string feat_out = "features.csv";
    auto* features = app.add_subcommand("features", "Extract a feature CSV from a manifest");
    features->add_option("manifest", feat_manifest, "dataset manifest")->required();
    features->add_option("--config", feat_config, "JSON config file");
    features->add_option("--out", feat_out, "output CSV path");

    // train
    CommonOpts train_opts;
    std::string train_out = "snapshot.json";
    std::string train_report;
    std::optional<std::uint64_t> train_seed;
    auto* train = app.add_subcommand("train", "Run one split + inference, write a snapshot");
    train->add_option("manifest", train_opts.manifest, "dataset manifest");
    train->add_flag("--synthetic", train_opts.synthetic, "use the built-in synthetic dataset");
    train->add_option("--config", train_opts.config_path, "JSON config file");
    train->add_option("--out", train_out, "snapshot output path");
    train->add_option("--report", train_report, "trial report path (default <out>.report.txt)");
    train->add_option("--seed", train_seed, "override experiment.base_seed");

    // experiment
    CommonOpts exp_opts;
    std::string exp_out = "experiment_out";
    std::optional<std::uint64_t> exp_seed;
    std::optional<std::size_t> exp_trials;
    std::optional<std::size_t> exp_jobs;
    auto* experiment =
        app.add_subcommand("experiment", "Repeated 80/20 evaluation protocol");
    experiment->add_option("manifest", exp_opts.manifest, "dataset manifest");
    experiment->add_flag("--synthetic", exp_opts.synthetic,
                         "use the built-in synthetic dataset");
    experiment->add_option("--config", exp_opts.config_path, "JSON config file");
    experiment->add_option("--out", exp_out, "output directory");
    experiment->add_option("--trials", exp_trials, "override experiment.trials");
    experiment->add_option("--seed", exp_seed, "override experiment.base_seed");
    experiment->add_option("--jobs", exp_jobs, "run trials concurrently");

    // classify
    std::string cls_snapshot;
    std::string cls_wav;
    auto* classify = app.add_subcommand("classify", "Classify a WAV with a trained snapshot");
    classify->add_option("snapshot", cls_snapshot, "model snapshot")->required();
    classify->add_option("wav", cls_wav, "recording to classify")->required();

    // synth
    std::string synth_out = "synthetic_data";
    std::string synth_config;
    std::optional<std::uint64_t> synth_seed;
    std::optional<std::size_t> synth_per_class;
    auto* synth = app.add_subcommand("synth", "Write a synthetic dataset + manifest to disk");
    synth->add_option("--out", synth_out, "output directory");
    synth->add_option("--config", synth_config, "JSON config file");
    synth->add_option("--seed", synth_seed, "override synthetic.seed");
    synth->add_option("--per-class", synth_per_class, "override synthetic.n_per_class");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    if (features->parsed()) {
        auto cfg = make_config(feat_config);
        check(mbnn_run_features(cfg.get(), feat_manifest.c_str(), feat_out.c_str()));
        std::cout << "wrote " << feat_out << "\n";
        return kExitOk;
    }

    if (train->parsed()) {
        auto cfg = make_config(train_opts.config_path);
        if (train_seed) {
            set_option(cfg.get(), "experiment.base_seed", std::to_string(*train_seed));
        }
        const std::string report =
            train_report.empty() ? train_out + ".report.txt" : train_report;
        check(mbnn_run_train(cfg.get(), manifest_or_synthetic(train_opts), train_out.c_str(),
                             report.c_str()));
        std::cout << "wrote " << train_out << " and " << report << "\n";
        return kExitOk;
    }

    if (experiment->parsed()) {
        auto cfg = make_config(exp_opts.config_path);
        if (exp_trials) {
            set_option(cfg.get(), "experiment.trials", std::to_string(*exp_trials));
        }
        if (exp_seed) {
            set_option(cfg.get(), "experiment.base_seed", std::to_string(*exp_seed));
        }
        if (exp_jobs) {
            set_option(cfg.get(), "experiment.jobs", std::to_string(*exp_jobs));
        }
        check(mbnn_run_experiment(cfg.get(), manifest_or_synthetic(exp_opts), exp_out.c_str()));
        std::cout << "wrote experiment outputs to " << exp_out << "\n";
        return kExitOk;
    }

    if (classify->parsed()) {
        mbnn_snapshot* snapshot = nullptr;
        check(mbnn_snapshot_load(cls_snapshot.c_str(), &snapshot));
        std::unique_ptr<mbnn_snapshot, decltype(&mbnn_snapshot_free)> snap_guard(
            snapshot, &mbnn_snapshot_free);

        mbnn_signal* signal = nullptr;
        check(mbnn_signal_load_wav(cls_wav.c_str(), &signal));
        std::unique_ptr<mbnn_signal, decltype(&mbnn_signal_free)> sig_guard(
            signal, &mbnn_signal_free);

        size_t n_segments = 0;
        mbnn_prediction record{};
        check(mbnn_classify(snapshot, signal, nullptr, 0, &n_segments, nullptr));
        std::vector<mbnn_prediction> segments(n_segments);
        check(mbnn_classify(snapshot, signal, segments.data(), segments.size(), &n_segments,
                            &record));

        nlohmann::json out;
        out["segments"] = nlohmann::json::array();
        for (size_t i = 0; i < segments.size(); ++i) {
            out["segments"].push_back({{"index", i},
                                       {"label", segments[i].label},
                                       {"mean", segments[i].mean},
                                       {"std", segments[i].stddev}});
        }
        out["record"] = {{"label", record.label},
                         {"mean", record.mean},
                         {"std", record.stddev}};
        std::cout << out.dump(2) << "\n";
        return kExitOk;
    }

    if (synth->parsed()) {
        auto cfg = make_config(synth_config);
        if (synth_seed) {
            set_option(cfg.get(), "synthetic.seed", std::to_string(*synth_seed));
        }
        if (synth_per_class) {
            set_option(cfg.get(), "synthetic.n_per_class", std::to_string(*synth_per_class));
        }
        check(mbnn_write_synthetic(cfg.get(), synth_out.c_str()));
        std::cout << "wrote synthetic dataset to " << synth_out << "\n";
        return kExitOk;
    }

    return kExitUsage;
}
