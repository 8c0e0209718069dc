#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace testutil {

// Unique directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        const auto base = std::filesystem::temp_directory_path();
        path_ = base / ("motorbnn_" + tag + "_" + std::to_string(::getpid()) + "_" +
                        std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void append_u16le(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(v & 0xFF);
    out.push_back(v >> 8);
}

inline void append_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(v & 0xFF);
    out.push_back((v >> 8) & 0xFF);
    out.push_back((v >> 16) & 0xFF);
    out.push_back((v >> 24) & 0xFF);
}

inline void append_tag(std::vector<std::uint8_t>& out, const char* tag) {
    out.insert(out.end(), tag, tag + 4);
}

// Interleaved 16-bit PCM WAV, any channel count.
inline std::vector<std::uint8_t> wav_pcm16(const std::vector<std::int16_t>& interleaved,
                                           std::uint16_t channels, std::uint32_t sample_rate) {
    std::vector<std::uint8_t> bytes;
    const std::uint32_t data_size = static_cast<std::uint32_t>(interleaved.size() * 2);
    append_tag(bytes, "RIFF");
    append_u32le(bytes, 36 + data_size);
    append_tag(bytes, "WAVE");
    append_tag(bytes, "fmt ");
    append_u32le(bytes, 16);
    append_u16le(bytes, 1);  // PCM
    append_u16le(bytes, channels);
    append_u32le(bytes, sample_rate);
    append_u32le(bytes, sample_rate * channels * 2);
    append_u16le(bytes, channels * 2);
    append_u16le(bytes, 16);
    append_tag(bytes, "data");
    append_u32le(bytes, data_size);
    for (std::int16_t v : interleaved) {
        append_u16le(bytes, static_cast<std::uint16_t>(v));
    }
    return bytes;
}

inline void write_bytes(const std::filesystem::path& path,
                        const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace testutil
