#pragma once

#include <stdexcept>
#include <string>

namespace pw {

// Bad or inconsistent user input (config files, CLI values, parameter ranges).
struct config_error : std::runtime_error {
	explicit config_error(const std::string &msg) : std::runtime_error(msg) {}
};

// Malformed files: snapshots with wrong magic, truncated payloads, bad CSV.
struct format_error : std::runtime_error {
	explicit format_error(const std::string &msg) : std::runtime_error(msg) {}
};

// Runtime numerical failure: NaN/Inf in state, ill-conditioned operator solve.
struct numerical_error : std::runtime_error {
	explicit numerical_error(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace pw
