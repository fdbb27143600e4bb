#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace snrbench {

enum class ErrorCode {
    invalid_architecture,
    shape,
    index,
    invalid_target,
    empty_data,
    domain,
    parameter,
    invalid_group,
    parse,
    config,
    missing_annotation,
    version_mismatch,
    schema_mismatch,
    io,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures surface as this exception; `code()` is stable and
// machine readable, `what()` is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

inline std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_architecture: return "invalid_architecture";
        case ErrorCode::shape: return "shape_error";
        case ErrorCode::index: return "index_error";
        case ErrorCode::invalid_target: return "invalid_target";
        case ErrorCode::empty_data: return "empty_data";
        case ErrorCode::domain: return "domain_error";
        case ErrorCode::parameter: return "parameter_error";
        case ErrorCode::invalid_group: return "invalid_group";
        case ErrorCode::parse: return "parse_error";
        case ErrorCode::config: return "config_error";
        case ErrorCode::missing_annotation: return "missing_annotation";
        case ErrorCode::version_mismatch: return "version_mismatch";
        case ErrorCode::schema_mismatch: return "schema_mismatch";
        case ErrorCode::io: return "io_error";
    }
    return "unknown";
}

}  // namespace snrbench
