#include "audio_io.hpp"

#include "errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace motorbnn {

bool is_known_class(const std::string& label) {
    return std::find(kClassNames.begin(), kClassNames.end(), label) != kClassNames.end();
}

int binary_label(const std::string& class_tag) {
    return class_tag == "healthy" ? 0 : 1;
}

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatIeeeFloat = 3;

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorKind::io, "cannot open file: " + path.string());
    }
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>());
}

std::uint16_t read_u16le(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32le(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

struct FmtInfo {
    std::uint16_t audio_format = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits_per_sample = 0;
};

double decode_sample(const std::uint8_t* p, std::uint16_t format, std::uint16_t bits) {
    if (format == kFormatIeeeFloat) {
        std::uint32_t raw = read_u32le(p);
        float v = std::bit_cast<float>(raw);
        return std::clamp(static_cast<double>(v), -1.0, 1.0);
    }
    switch (bits) {
        case 8:
            // 8-bit WAV is unsigned with midpoint 128
            return (static_cast<double>(p[0]) - 128.0) / 128.0;
        case 16: {
            auto v = static_cast<std::int16_t>(read_u16le(p));
            return static_cast<double>(v) / 32768.0;
        }
        case 24: {
            std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
            if (v & 0x800000) {
                v |= ~0xFFFFFF;  // sign extend
            }
            return static_cast<double>(v) / 8388608.0;
        }
        default:
            fail(ErrorKind::unsupported_format, "unsupported bit depth");
    }
}

}  // namespace

SignalRecord load_wav(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0) {
        fail(ErrorKind::format, "not a RIFF file (bad 'RIFF' chunk): " + path.string());
    }
    if (std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        fail(ErrorKind::format, "RIFF form type is not 'WAVE': " + path.string());
    }

    FmtInfo fmt;
    bool have_fmt = false;
    const std::uint8_t* data = nullptr;
    std::size_t data_size = 0;
    bool have_data = false;

    std::size_t off = 12;
    while (off + 8 <= bytes.size()) {
        char id[5] = {};
        std::memcpy(id, bytes.data() + off, 4);
        const std::uint32_t size = read_u32le(bytes.data() + off + 4);
        if (off + 8 + size > bytes.size()) {
            fail(ErrorKind::format,
                 std::string("truncated '") + id + "' chunk in " + path.string());
        }
        const std::uint8_t* body = bytes.data() + off + 8;
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (size < 16) {
                fail(ErrorKind::format, "'fmt ' chunk shorter than 16 bytes in " + path.string());
            }
            fmt.audio_format = read_u16le(body);
            fmt.channels = read_u16le(body + 2);
            fmt.sample_rate = read_u32le(body + 4);
            fmt.bits_per_sample = read_u16le(body + 14);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = body;
            data_size = size;
            have_data = true;
        }
        // unknown chunks are skipped; chunk bodies are word-aligned
        off += 8 + size + (size & 1);
    }

    if (!have_fmt) {
        fail(ErrorKind::format, "missing 'fmt ' chunk in " + path.string());
    }
    if (!have_data) {
        fail(ErrorKind::format, "missing 'data' chunk in " + path.string());
    }
    if (fmt.channels == 0) {
        fail(ErrorKind::format, "'fmt ' chunk declares zero channels in " + path.string());
    }
    if (fmt.sample_rate == 0) {
        fail(ErrorKind::format, "'fmt ' chunk declares zero sample rate in " + path.string());
    }

    const bool pcm_ok = fmt.audio_format == kFormatPcm &&
                        (fmt.bits_per_sample == 8 || fmt.bits_per_sample == 16 ||
                         fmt.bits_per_sample == 24);
    const bool float_ok = fmt.audio_format == kFormatIeeeFloat && fmt.bits_per_sample == 32;
    if (!pcm_ok && !float_ok) {
        std::ostringstream msg;
        msg << "unsupported encoding (format tag " << fmt.audio_format << ", "
            << fmt.bits_per_sample << "-bit) in " << path.string();
        fail(ErrorKind::unsupported_format, msg.str());
    }

    if (data_size == 0) {
        fail(ErrorKind::empty_signal, "'data' chunk is empty in " + path.string());
    }
    const std::size_t bytes_per_sample = fmt.bits_per_sample / 8;
    const std::size_t frame_size = bytes_per_sample * fmt.channels;
    if (data_size % frame_size != 0) {
        fail(ErrorKind::format,
             "'data' chunk size is not a multiple of the frame size in " + path.string());
    }

    const std::size_t frames = data_size / frame_size;
    SignalRecord record;
    record.sample_rate = fmt.sample_rate;
    record.source_id = path.string();
    record.samples.resize(frames);
    for (std::size_t f = 0; f < frames; ++f) {
        const std::uint8_t* p = data + f * frame_size;
        double acc = 0.0;
        for (std::uint16_t c = 0; c < fmt.channels; ++c) {
            acc += decode_sample(p + c * bytes_per_sample, fmt.audio_format, fmt.bits_per_sample);
        }
        record.samples[f] = acc / fmt.channels;
    }
    return record;
}

void write_wav_pcm16(const std::filesystem::path& path,
                     const std::vector<double>& samples,
                     std::uint32_t sample_rate) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(ErrorKind::io, "cannot open file for writing: " + path.string());
    }
    const std::uint32_t data_size = static_cast<std::uint32_t>(samples.size() * 2);

    auto put_u16 = [&](std::uint16_t v) {
        char b[2] = {static_cast<char>(v & 0xFF), static_cast<char>(v >> 8)};
        out.write(b, 2);
    };
    auto put_u32 = [&](std::uint32_t v) {
        char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                     static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
        out.write(b, 4);
    };

    out.write("RIFF", 4);
    put_u32(36 + data_size);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    put_u32(16);
    put_u16(kFormatPcm);
    put_u16(1);  // mono
    put_u32(sample_rate);
    put_u32(sample_rate * 2);
    put_u16(2);
    put_u16(16);
    out.write("data", 4);
    put_u32(data_size);
    for (double s : samples) {
        const double clamped = std::clamp(s, -1.0, 1.0);
        const auto v = static_cast<std::int16_t>(std::lround(clamped * 32767.0));
        put_u16(static_cast<std::uint16_t>(v));
    }
    if (!out) {
        fail(ErrorKind::io, "failed writing " + path.string());
    }
}

std::vector<Segment> segment(const SignalRecord& record, double window_seconds) {
    if (!(window_seconds > 0.0)) {
        fail(ErrorKind::invalid_argument, "window_seconds must be positive");
    }
    const auto window_len =
        static_cast<std::size_t>(std::llround(window_seconds * record.sample_rate));
    if (window_len < 2) {
        fail(ErrorKind::invalid_argument, "analysis window must cover at least 2 samples");
    }
    const std::size_t count = record.samples.size() / window_len;
    std::vector<Segment> segments;
    segments.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Segment seg;
        seg.sample_rate = record.sample_rate;
        seg.parent = record.source_id;
        seg.index = i;
        const auto begin = record.samples.begin() + static_cast<std::ptrdiff_t>(i * window_len);
        seg.samples.assign(begin, begin + static_cast<std::ptrdiff_t>(window_len));
        segments.push_back(std::move(seg));
    }
    return segments;
}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::io, "cannot open manifest: " + path.string());
    }
    std::vector<ManifestEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty()) {
            continue;
        }
        const auto comma = text.rfind(',');
        if (comma == std::string::npos) {
            fail(ErrorKind::format,
                 "manifest line " + std::to_string(line_no) + ": expected `<path>,<label>`");
        }
        ManifestEntry entry;
        entry.path = trim(text.substr(0, comma));
        entry.label = trim(text.substr(comma + 1));
        if (entry.path.empty()) {
            fail(ErrorKind::format, "manifest line " + std::to_string(line_no) + ": empty path");
        }
        if (!is_known_class(entry.label)) {
            fail(ErrorKind::format, "manifest line " + std::to_string(line_no) +
                                        ": unknown label '" + entry.label + "'");
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

std::vector<SignalRecord> load_dataset(const std::filesystem::path& manifest_path) {
    const auto entries = load_manifest(manifest_path);
    const auto base = manifest_path.parent_path();
    std::vector<SignalRecord> records;
    records.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& entry = entries[i];
        try {
            SignalRecord record = load_wav(base / entry.path);
            record.label = entry.label;
            record.source_id = entry.path;
            records.push_back(std::move(record));
        } catch (const Error& e) {
            fail(e.kind(), "manifest entry " + std::to_string(i + 1) + " (" + entry.path +
                               "): " + e.what());
        }
    }
    return records;
}

}  // namespace motorbnn
