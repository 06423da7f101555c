#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace shsbm {

// All library failures carry a stable machine-readable code alongside the
// human-readable message.  Codes in use:
//   invalid_config, invalid_subset, invalid_argument, config_mismatch,
//   shape_mismatch, unsupported_divergence, undefined_floor, missing_sigma,
//   enumeration_guard, unknown_lemma, parse_error, io_error, internal_error
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace shsbm
