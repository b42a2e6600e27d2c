#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tempograph {

// Failure categories surfaced by every layer. The first five are the codes
// the HTTP and CLI surfaces report; the rest are ingestion detail that maps
// onto them (see api_code()).
enum class ErrorCode {
    domain,
    schema,
    parse,
    contract,
    not_found,
    referential,
    integrity,
    incompatible,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::domain: return "domain_error";
        case ErrorCode::schema: return "schema_error";
        case ErrorCode::parse: return "parse_error";
        case ErrorCode::contract: return "contract_error";
        case ErrorCode::not_found: return "not_found";
        case ErrorCode::referential: return "referential_error";
        case ErrorCode::integrity: return "integrity_error";
        case ErrorCode::incompatible: return "incompatible_error";
    }
    return "unknown";
}

// Collapses ingestion-only codes onto the public error enum.
inline ErrorCode api_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::referential:
        case ErrorCode::integrity:
        case ErrorCode::incompatible:
            return ErrorCode::parse;
        default:
            return code;
    }
}

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

}  // namespace tempograph
