#pragma once

#include <stdexcept>
#include <string>

namespace persona {

// Error categories map one-to-one onto CLI exit codes.
enum class ErrorKind { Usage = 1, Data = 2, Invariant = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

class InvariantError : public Error {
public:
    explicit InvariantError(const std::string& what) : Error(ErrorKind::Invariant, what) {}
};

/// Raised for input that is well-formed but too small for the requested analysis
/// (fewer pixels than a filter needs, fewer samples than a clustering needs).
class TooSmallError : public DataError {
public:
    using DataError::DataError;
};

}  // namespace persona
