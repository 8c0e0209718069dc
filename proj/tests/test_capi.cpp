// Exercises the shared library surface end to end.

#include "motorbnn.h"
#include "test_helpers.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cstring>
#include <string>

namespace {

// small synthetic dataset + short chains so the full pipeline stays fast
const char* kFastConfig = R"({
  "synthetic": {"n_per_class": 5, "sample_rate": 8192, "seed": 7},
  "spectral": {"band_hi_hz": 4000.0},
  "chain": {"n_steps": 800, "thin": 10},
  "experiment": {"trials": 2, "base_seed": 55}
})";

struct Config {
    explicit Config(const char* json) { REQUIRE(mbnn_config_parse(json, &ptr) == MBNN_OK); }
    ~Config() { mbnn_config_free(ptr); }
    mbnn_config* ptr = nullptr;
};

}  // namespace

TEST_CASE("status names and version") {
    CHECK(std::string(mbnn_status_name(MBNN_OK)) == "ok");
    CHECK(std::string(mbnn_status_name(MBNN_ERR_IO)) == "io-error");
    CHECK(std::string(mbnn_status_name(MBNN_ERR_DIVERGENCE)) == "divergence");
    CHECK(std::strlen(mbnn_version()) > 0);
}

TEST_CASE("config handles") {
    SUBCASE("defaults round trip through dump/parse") {
        mbnn_config* cfg = nullptr;
        REQUIRE(mbnn_config_default(&cfg) == MBNN_OK);
        char* dumped = nullptr;
        REQUIRE(mbnn_config_dump(cfg, &dumped) == MBNN_OK);
        REQUIRE(dumped != nullptr);
        mbnn_config* reparsed = nullptr;
        CHECK(mbnn_config_parse(dumped, &reparsed) == MBNN_OK);
        char* dumped_again = nullptr;
        REQUIRE(mbnn_config_dump(reparsed, &dumped_again) == MBNN_OK);
        CHECK(std::string(dumped) == dumped_again);
        mbnn_string_free(dumped);
        mbnn_string_free(dumped_again);
        mbnn_config_free(cfg);
        mbnn_config_free(reparsed);
    }
    SUBCASE("bad JSON yields a format error with a message") {
        mbnn_config* cfg = nullptr;
        CHECK(mbnn_config_parse("{oops", &cfg) == MBNN_ERR_FORMAT);
        CHECK(std::strlen(mbnn_last_error()) > 0);
    }
    SUBCASE("unknown keys are rejected") {
        mbnn_config* cfg = nullptr;
        CHECK(mbnn_config_parse(R"({"nope": 1})", &cfg) == MBNN_ERR_FORMAT);

        Config ok(kFastConfig);
        CHECK(mbnn_config_set(ok.ptr, "experiment.bogus", "1") == MBNN_ERR_FORMAT);
        CHECK(mbnn_config_set(ok.ptr, "experiment.trials", "3") == MBNN_OK);
    }
    SUBCASE("null arguments are invalid") {
        CHECK(mbnn_config_default(nullptr) == MBNN_ERR_INVALID_ARG);
        CHECK(mbnn_config_load(nullptr, nullptr) == MBNN_ERR_INVALID_ARG);
    }
}

TEST_CASE("signal loading through the C API") {
    testutil::TempDir dir("capi");
    SUBCASE("missing file reports io error") {
        mbnn_signal* signal = nullptr;
        CHECK(mbnn_signal_load_wav(dir.file("nope.wav").c_str(), &signal) == MBNN_ERR_IO);
        CHECK(std::string(mbnn_last_error()).find("nope.wav") != std::string::npos);
    }
    SUBCASE("valid file loads and reports its dimensions") {
        testutil::write_bytes(dir.file("ok.wav"),
                              testutil::wav_pcm16(std::vector<std::int16_t>(256, 42), 1, 8000));
        mbnn_signal* signal = nullptr;
        REQUIRE(mbnn_signal_load_wav(dir.file("ok.wav").c_str(), &signal) == MBNN_OK);
        CHECK(mbnn_signal_sample_count(signal) == 256);
        CHECK(mbnn_signal_sample_rate(signal) == 8000);
        mbnn_signal_free(signal);
    }
}

TEST_CASE("pipeline through the C API: synth, features, train, classify") {
    testutil::TempDir dir("capi_pipe");
    Config cfg(kFastConfig);

    // synth writes WAVs + manifest
    REQUIRE(mbnn_write_synthetic(cfg.ptr, dir.path().c_str()) == MBNN_OK);
    const auto manifest = dir.file("manifest.txt");
    REQUIRE(std::filesystem::exists(manifest));

    // features CSV: 25 records + header
    const auto features_csv = dir.file("features.csv");
    REQUIRE(mbnn_run_features(cfg.ptr, manifest.c_str(), features_csv.c_str()) == MBNN_OK);
    const auto text = testutil::read_text(features_csv);
    CHECK(std::count(text.begin(), text.end(), '\n') == 26);
    CHECK(text.rfind("source_id,segment,class,label,f1,f2,f3,f4,f5", 0) == 0);

    // train on the synthetic dataset and snapshot the posterior
    const auto snapshot_path = dir.file("model.json");
    const auto report_path = dir.file("model.report.txt");
    REQUIRE(mbnn_run_train(cfg.ptr, nullptr, snapshot_path.c_str(), report_path.c_str()) ==
            MBNN_OK);
    REQUIRE(std::filesystem::exists(snapshot_path));
    CHECK(testutil::read_text(report_path).find("accuracy") != std::string::npos);

    mbnn_snapshot* snapshot = nullptr;
    REQUIRE(mbnn_snapshot_load(snapshot_path.c_str(), &snapshot) == MBNN_OK);
    CHECK(mbnn_snapshot_feature_count(snapshot) == 5);

    // classify a healthy and a faulty recording from the synthetic set
    const auto classify_label = [&](const std::string& wav) {
        mbnn_signal* signal = nullptr;
        REQUIRE(mbnn_signal_load_wav(dir.file(wav).c_str(), &signal) == MBNN_OK);
        size_t n_segments = 0;
        mbnn_prediction record{};
        mbnn_prediction segment{};
        REQUIRE(mbnn_classify(snapshot, signal, &segment, 1, &n_segments, &record) == MBNN_OK);
        CHECK(n_segments == 1);
        CHECK(record.mean >= 0.0);
        CHECK(record.mean <= 1.0);
        CHECK(segment.label == record.label);
        mbnn_signal_free(signal);
        return record.label;
    };
    CHECK(classify_label("healthy_0.wav") == 0);
    CHECK(classify_label("fault4_0.wav") == 1);

    SUBCASE("counting call reports the segment total without writing") {
        mbnn_signal* signal = nullptr;
        REQUIRE(mbnn_signal_load_wav(dir.file("healthy_1.wav").c_str(), &signal) == MBNN_OK);
        size_t n_segments = 0;
        REQUIRE(mbnn_classify(snapshot, signal, nullptr, 0, &n_segments, nullptr) == MBNN_OK);
        CHECK(n_segments == 1);
        mbnn_signal_free(signal);
    }
    SUBCASE("classification of identical input is identical") {
        mbnn_signal* signal = nullptr;
        REQUIRE(mbnn_signal_load_wav(dir.file("fault1_0.wav").c_str(), &signal) == MBNN_OK);
        mbnn_prediction a{};
        mbnn_prediction b{};
        REQUIRE(mbnn_classify(snapshot, signal, nullptr, 0, nullptr, &a) == MBNN_OK);
        REQUIRE(mbnn_classify(snapshot, signal, nullptr, 0, nullptr, &b) == MBNN_OK);
        CHECK(a.mean == b.mean);
        CHECK(a.stddev == b.stddev);
        CHECK(a.label == b.label);
        mbnn_signal_free(signal);
    }
    SUBCASE("null handles are rejected") {
        CHECK(mbnn_classify(nullptr, nullptr, nullptr, 0, nullptr, nullptr) ==
              MBNN_ERR_INVALID_ARG);
    }

    mbnn_snapshot_free(snapshot);
}

TEST_CASE("experiment through the C API is byte-deterministic") {
    testutil::TempDir dir("capi_exp");
    Config cfg(kFastConfig);

    const auto out1 = dir.file("run1");
    const auto out2 = dir.file("run2");
    REQUIRE(mbnn_run_experiment(cfg.ptr, nullptr, out1.c_str()) == MBNN_OK);
    REQUIRE(mbnn_run_experiment(cfg.ptr, nullptr, out2.c_str()) == MBNN_OK);

    for (const char* name : {"results.csv", "summary.json", "table1.txt"}) {
        const auto a = testutil::read_text(out1 / name);
        const auto b = testutil::read_text(out2 / name);
        REQUIRE(!a.empty());
        CHECK(a == b);
    }
    const auto summary = nlohmann::json::parse(testutil::read_text(out1 / "summary.json"));
    CHECK(summary.at("n_trials") == 2);
    CHECK(summary.at("mean_accuracy").get<double>() >= 0.0);
    CHECK(std::filesystem::exists(out1 / "confusion_0.txt"));
    CHECK(std::filesystem::exists(out1 / "confusion_1.txt"));
    CHECK(std::filesystem::exists(out1 / "hist_healthy.csv"));
}

TEST_CASE("snapshot errors surface as typed status codes") {
    testutil::TempDir dir("capi_snap");
    mbnn_snapshot* snapshot = nullptr;

    SUBCASE("missing file") {
        CHECK(mbnn_snapshot_load(dir.file("none.json").c_str(), &snapshot) == MBNN_ERR_IO);
    }
    SUBCASE("not a snapshot") {
        std::ofstream(dir.file("bad.json")) << R"({"format": "something-else"})";
        CHECK(mbnn_snapshot_load(dir.file("bad.json").c_str(), &snapshot) == MBNN_ERR_FORMAT);
    }
}
