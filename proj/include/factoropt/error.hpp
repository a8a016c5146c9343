#pragma once

#include <stdexcept>
#include <string>

namespace factoropt {

/// Failure classes. The CLI maps each one onto a distinct exit code.
enum class ErrorKind {
    parse,       // input text could not be read as the expected format
    validation,  // well-formed input that violates a domain rule
    io,          // filesystem / network
    numeric,     // divergence, non-finite values
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline Error parse_error(const std::string& msg) { return {ErrorKind::parse, msg}; }
inline Error validation_error(const std::string& msg) { return {ErrorKind::validation, msg}; }
inline Error io_error(const std::string& msg) { return {ErrorKind::io, msg}; }
inline Error numeric_error(const std::string& msg) { return {ErrorKind::numeric, msg}; }

}  // namespace factoropt
