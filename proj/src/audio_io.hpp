#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace motorbnn {

inline constexpr std::array<const char*, 5> kClassNames = {
    "healthy", "fault1", "fault2", "fault3", "fault4"};

bool is_known_class(const std::string& label);

// 1 for any fault class, 0 for healthy.
int binary_label(const std::string& class_tag);

// A decoded mono recording, samples normalized to [-1, 1].
struct SignalRecord {
    std::vector<double> samples;
    std::uint32_t sample_rate = 0;
    std::string label;      // healthy, fault1..fault4 (empty if unlabeled)
    std::string source_id;
};

// One fixed-length analysis window cut from a record.
struct Segment {
    std::vector<double> samples;
    std::uint32_t sample_rate = 0;
    std::string parent;     // source_id of the originating record
    std::size_t index = 0;
};

// Decodes a RIFF/WAVE file. PCM 8/16/24-bit integer and 32-bit float are
// supported; multi-channel audio is downmixed by channel mean; integer
// samples are divided by the type's max magnitude (e.g. 32768 for 16-bit).
SignalRecord load_wav(const std::filesystem::path& path);

void write_wav_pcm16(const std::filesystem::path& path,
                     const std::vector<double>& samples,
                     std::uint32_t sample_rate);

// Consecutive non-overlapping windows of round(sample_rate * window_seconds)
// samples; a trailing remainder shorter than one window is discarded.
std::vector<Segment> segment(const SignalRecord& record, double window_seconds);

struct ManifestEntry {
    std::string path;   // as written in the manifest, relative to it
    std::string label;
};

// Text manifest: one `<relative-path>,<label>` per line, blank lines skipped.
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

// Loads and labels every WAV named by the manifest. Errors are prefixed with
// the manifest line that caused them.
std::vector<SignalRecord> load_dataset(const std::filesystem::path& manifest_path);

}  // namespace motorbnn
