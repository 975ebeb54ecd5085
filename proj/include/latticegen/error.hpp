#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace latticegen {

/// Every recoverable failure carries a stable machine-readable code
/// (e.g. "UNKNOWN-SYSTEM", "STALE-PATCH") alongside the message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)), message_(message) {}

    const std::string& code() const noexcept { return code_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::string code_;
    std::string message_;
};

}  // namespace latticegen
