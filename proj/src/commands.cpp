#include "commands.hpp"

#include "errors.hpp"
#include "report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace motorbnn {

namespace {

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(ErrorKind::io, "cannot open file for writing: " + path.string());
    }
    out << text;
    if (!out) {
        fail(ErrorKind::io, "failed writing " + path.string());
    }
}

std::string number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

std::string features_csv(const std::vector<LabeledFeatures>& features, std::size_t n_features) {
    std::ostringstream out;
    out << "source_id,segment,class,label";
    for (std::size_t f = 1; f <= n_features; ++f) {
        out << ",f" << f;
    }
    out << '\n';
    for (const auto& item : features) {
        out << item.source_id << ',' << item.segment_index << ',' << item.class_tag << ','
            << item.label;
        for (double v : item.x) {
            out << ',' << number(v);
        }
        out << '\n';
    }
    return out.str();
}

void cmd_features(const RunConfig& cfg, const std::filesystem::path& manifest,
                  const std::filesystem::path& out_csv) {
    const auto records = load_dataset(manifest);
    const auto features = featurize(records, cfg.spectral);
    write_text_file(out_csv, features_csv(features, cfg.spectral.n_features));
}

std::vector<SignalRecord> load_records(const RunConfig& cfg,
                                       const std::optional<std::filesystem::path>& manifest) {
    if (manifest) {
        return load_dataset(*manifest);
    }
    return generate_synthetic_dataset(cfg.synthetic);
}

TrainOutput cmd_train(const RunConfig& cfg,
                      const std::optional<std::filesystem::path>& manifest,
                      const std::filesystem::path& out_snapshot,
                      const std::optional<std::filesystem::path>& out_report) {
    const auto records = load_records(cfg, manifest);
    const auto features = featurize(records, cfg.spectral);

    const auto artifacts =
        run_trial_full(features, cfg.bnn_setup(), cfg.experiment, cfg.experiment.base_seed);

    TrainOutput output;
    output.trial = artifacts.result;
    output.snapshot.shape = artifacts.shape;
    output.snapshot.model = cfg.model;
    output.snapshot.spectral = cfg.spectral;
    output.snapshot.normalizer = artifacts.normalizer;
    output.snapshot.threshold = cfg.experiment.threshold;
    output.snapshot.chain = artifacts.chain;
    save_snapshot(output.snapshot, out_snapshot);

    if (out_report) {
        std::ostringstream report;
        report << "seed: " << output.trial.seed << '\n'
               << "accuracy: " << number(output.trial.accuracy) << '\n'
               << "chain acceptance rate: " << number(output.trial.accept_rate) << '\n'
               << '\n'
               << render_confusion(output.trial);
        write_text_file(*out_report, report.str());
    }
    return output;
}

ExperimentSummary cmd_experiment(const RunConfig& cfg,
                                 const std::optional<std::filesystem::path>& manifest,
                                 const std::filesystem::path& outdir) {
    const auto records = load_records(cfg, manifest);
    const auto features = featurize(records, cfg.spectral);
    const auto summary = run_experiment(features, cfg.bnn_setup(), cfg.experiment);
    write_experiment_outputs(summary, outdir);
    return summary;
}

std::filesystem::path cmd_synth(const RunConfig& cfg, const std::filesystem::path& outdir) {
    std::filesystem::create_directories(outdir);
    const auto records = generate_synthetic_dataset(cfg.synthetic);
    std::ostringstream manifest;
    for (const auto& record : records) {
        const std::string name = record.source_id + ".wav";
        write_wav_pcm16(outdir / name, record.samples, record.sample_rate);
        manifest << name << ',' << record.label << '\n';
    }
    const auto manifest_path = outdir / "manifest.txt";
    write_text_file(manifest_path, manifest.str());
    return manifest_path;
}

ClassifyOutput classify_record(const ModelSnapshot& snapshot, const SignalRecord& record) {
    const auto segments = segment(record, snapshot.spectral.window_seconds);
    if (segments.empty()) {
        fail(ErrorKind::invalid_argument,
             "record is shorter than one analysis window (" +
                 std::to_string(snapshot.spectral.window_seconds) + " s)");
    }

    ClassifyOutput output;
    std::size_t faulty_votes = 0;
    for (const auto& seg : segments) {
        const Spectrum banded = band_limit(fft_magnitude(seg), snapshot.spectral.band_lo_hz,
                                           snapshot.spectral.band_hi_hz);
        const auto raw = extract_features(banded, snapshot.spectral.n_features);
        const auto x = snapshot.normalizer.apply(raw);
        const PredictiveSummary pred = snapshot_predict(snapshot, x);
        SegmentPrediction sp;
        sp.index = seg.index;
        sp.mean = pred.mean;
        sp.stddev = pred.stddev;
        sp.label = pred.mean >= snapshot.threshold ? 1 : 0;
        faulty_votes += sp.label;
        output.record_mean += pred.mean;
        output.record_stddev += pred.stddev;
        output.segments.push_back(sp);
    }
    const auto n = static_cast<double>(output.segments.size());
    output.record_mean /= n;
    output.record_stddev /= n;
    // tie goes to faulty
    output.record_label = 2 * faulty_votes >= output.segments.size() ? 1 : 0;
    return output;
}

}  // namespace motorbnn
