#pragma once

#include <stdexcept>
#include <string>

namespace memclass {

// Error taxonomy mirrors the CLI exit codes: usage 2, data 3, model/schema 4.

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ModelError : std::runtime_error {
    explicit ModelError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace memclass
