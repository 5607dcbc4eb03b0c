#pragma once

#include <stdexcept>
#include <string>

namespace sbm {

// Rejected configuration (parse failure or failed validation); process exit 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Solver stopped short of its tolerance; process exit 3.
struct NonConvergenceError : std::runtime_error {
    explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failure while writing or reading run outputs.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sbm
