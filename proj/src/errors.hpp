#pragma once

#include <stdexcept>
#include <string>

namespace motorbnn {

enum class ErrorKind {
    io,                  // file missing or unreadable
    format,              // malformed WAV / manifest / JSON input
    unsupported_format,  // recognizable but unsupported encoding
    empty_signal,
    empty_band,
    shape_mismatch,
    divergence,          // sampler or optimizer produced non-finite state
    config,              // bad or unknown configuration key
    invalid_argument,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace motorbnn
