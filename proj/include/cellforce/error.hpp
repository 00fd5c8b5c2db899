#pragma once

#include <stdexcept>
#include <string>

namespace cellforce {

enum class ErrorKind {
    Config,
    Geometry,
    Location,
    Assembly,
    Solver,
    SpdViolation,
    Domain,
    Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base exception for everything the library throws on a contract violation.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace cellforce
