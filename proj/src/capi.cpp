#include "motorbnn.h"

#include "commands.hpp"
#include "errors.hpp"

#include <cstring>
#include <exception>
#include <new>
#include <string>

struct mbnn_config {
    motorbnn::RunConfig cfg;
};

struct mbnn_signal {
    motorbnn::SignalRecord record;
};

struct mbnn_snapshot {
    motorbnn::ModelSnapshot snapshot;
};

namespace {

thread_local std::string g_last_error;

int status_of(motorbnn::ErrorKind kind) {
    using motorbnn::ErrorKind;
    switch (kind) {
        case ErrorKind::io:
            return MBNN_ERR_IO;
        case ErrorKind::format:
        case ErrorKind::config:
            return MBNN_ERR_FORMAT;
        case ErrorKind::unsupported_format:
            return MBNN_ERR_UNSUPPORTED;
        case ErrorKind::empty_signal:
        case ErrorKind::empty_band:
            return MBNN_ERR_EMPTY;
        case ErrorKind::shape_mismatch:
            return MBNN_ERR_SHAPE;
        case ErrorKind::divergence:
            return MBNN_ERR_DIVERGENCE;
        case ErrorKind::invalid_argument:
            return MBNN_ERR_INVALID_ARG;
    }
    return MBNN_ERR_INTERNAL;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return MBNN_OK;
    } catch (const motorbnn::Error& e) {
        g_last_error = e.what();
        return status_of(e.kind());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return MBNN_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return MBNN_ERR_INTERNAL;
    }
}

int require(bool ok, const char* message) {
    if (!ok) {
        g_last_error = message;
        return MBNN_ERR_INVALID_ARG;
    }
    return MBNN_OK;
}

char* copy_string(const std::string& text) {
    char* out = new char[text.size() + 1];
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* mbnn_status_name(int status) {
    switch (status) {
        case MBNN_OK:
            return "ok";
        case MBNN_ERR_IO:
            return "io-error";
        case MBNN_ERR_FORMAT:
            return "format-error";
        case MBNN_ERR_UNSUPPORTED:
            return "unsupported-format";
        case MBNN_ERR_EMPTY:
            return "empty-input";
        case MBNN_ERR_SHAPE:
            return "shape-mismatch";
        case MBNN_ERR_DIVERGENCE:
            return "divergence";
        case MBNN_ERR_INVALID_ARG:
            return "invalid-argument";
        default:
            return "internal-error";
    }
}

const char* mbnn_last_error(void) {
    return g_last_error.c_str();
}

const char* mbnn_version(void) {
    return "0.1.0";
}

void mbnn_string_free(char* text) {
    delete[] text;
}

int mbnn_config_default(mbnn_config** out) {
    if (int rc = require(out != nullptr, "out must not be NULL")) {
        return rc;
    }
    return guarded([&] { *out = new mbnn_config{motorbnn::RunConfig{}}; });
}

int mbnn_config_load(const char* path, mbnn_config** out) {
    if (int rc = require(path && out, "path and out must not be NULL")) {
        return rc;
    }
    return guarded([&] { *out = new mbnn_config{motorbnn::load_run_config(path)}; });
}

int mbnn_config_parse(const char* json_text, mbnn_config** out) {
    if (int rc = require(json_text && out, "json_text and out must not be NULL")) {
        return rc;
    }
    return guarded([&] { *out = new mbnn_config{motorbnn::parse_run_config(json_text)}; });
}

int mbnn_config_set(mbnn_config* cfg, const char* dotted_key, const char* value) {
    if (int rc = require(cfg && dotted_key && value, "cfg, key and value must not be NULL")) {
        return rc;
    }
    return guarded([&] { motorbnn::apply_override(cfg->cfg, dotted_key, value); });
}

int mbnn_config_dump(const mbnn_config* cfg, char** json_out) {
    if (int rc = require(cfg && json_out, "cfg and json_out must not be NULL")) {
        return rc;
    }
    return guarded([&] { *json_out = copy_string(motorbnn::run_config_json(cfg->cfg)); });
}

void mbnn_config_free(mbnn_config* cfg) {
    delete cfg;
}

int mbnn_signal_load_wav(const char* path, mbnn_signal** out) {
    if (int rc = require(path && out, "path and out must not be NULL")) {
        return rc;
    }
    return guarded([&] { *out = new mbnn_signal{motorbnn::load_wav(path)}; });
}

size_t mbnn_signal_sample_count(const mbnn_signal* signal) {
    return signal ? signal->record.samples.size() : 0;
}

uint32_t mbnn_signal_sample_rate(const mbnn_signal* signal) {
    return signal ? signal->record.sample_rate : 0;
}

void mbnn_signal_free(mbnn_signal* signal) {
    delete signal;
}

int mbnn_snapshot_load(const char* path, mbnn_snapshot** out) {
    if (int rc = require(path && out, "path and out must not be NULL")) {
        return rc;
    }
    return guarded([&] { *out = new mbnn_snapshot{motorbnn::load_snapshot(path)}; });
}

size_t mbnn_snapshot_feature_count(const mbnn_snapshot* snapshot) {
    return snapshot ? snapshot->snapshot.spectral.n_features : 0;
}

void mbnn_snapshot_free(mbnn_snapshot* snapshot) {
    delete snapshot;
}

int mbnn_classify(const mbnn_snapshot* snapshot, const mbnn_signal* signal,
                  mbnn_prediction* segments, size_t capacity, size_t* n_segments,
                  mbnn_prediction* record) {
    if (int rc = require(snapshot && signal, "snapshot and signal must not be NULL")) {
        return rc;
    }
    if (int rc = require(segments != nullptr || capacity == 0,
                         "segments must not be NULL when capacity > 0")) {
        return rc;
    }
    return guarded([&] {
        const auto output = motorbnn::classify_record(snapshot->snapshot, signal->record);
        if (n_segments) {
            *n_segments = output.segments.size();
        }
        const size_t n = std::min(capacity, output.segments.size());
        for (size_t i = 0; i < n; ++i) {
            segments[i] = {output.segments[i].label, output.segments[i].mean,
                           output.segments[i].stddev};
        }
        if (record) {
            *record = {output.record_label, output.record_mean, output.record_stddev};
        }
    });
}

int mbnn_run_features(const mbnn_config* cfg, const char* manifest_path, const char* out_csv) {
    if (int rc = require(cfg && manifest_path && out_csv,
                         "cfg, manifest_path and out_csv must not be NULL")) {
        return rc;
    }
    return guarded([&] { motorbnn::cmd_features(cfg->cfg, manifest_path, out_csv); });
}

int mbnn_run_train(const mbnn_config* cfg, const char* manifest_path, const char* out_snapshot,
                   const char* out_report) {
    if (int rc = require(cfg && out_snapshot, "cfg and out_snapshot must not be NULL")) {
        return rc;
    }
    return guarded([&] {
        std::optional<std::filesystem::path> manifest;
        if (manifest_path) {
            manifest = manifest_path;
        }
        std::optional<std::filesystem::path> report;
        if (out_report) {
            report = out_report;
        }
        motorbnn::cmd_train(cfg->cfg, manifest, out_snapshot, report);
    });
}

int mbnn_run_experiment(const mbnn_config* cfg, const char* manifest_path, const char* out_dir) {
    if (int rc = require(cfg && out_dir, "cfg and out_dir must not be NULL")) {
        return rc;
    }
    return guarded([&] {
        std::optional<std::filesystem::path> manifest;
        if (manifest_path) {
            manifest = manifest_path;
        }
        motorbnn::cmd_experiment(cfg->cfg, manifest, out_dir);
    });
}

int mbnn_write_synthetic(const mbnn_config* cfg, const char* out_dir) {
    if (int rc = require(cfg && out_dir, "cfg and out_dir must not be NULL")) {
        return rc;
    }
    return guarded([&] { motorbnn::cmd_synth(cfg->cfg, out_dir); });
}

}  // extern "C"
