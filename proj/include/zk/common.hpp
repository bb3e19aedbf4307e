#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace zk {

/// Raised when a configuration file or experiment description is invalid.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg, int line = 0)
        : std::runtime_error(line > 0 ? "config error (line " + std::to_string(line) + "): " + msg
                                      : "config error: " + msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_ = 0;
};

/// Raised when a computation produces non-finite values or a solve fails.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// FNV-1a 64-bit hash, used for output-file checksums in run manifests.
inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace zk
