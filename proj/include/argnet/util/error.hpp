#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace argnet {

/// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data. `line()` is 1-based, 0 when unknown.
class IngestionError : public Error {
public:
    IngestionError(const std::string& what, std::size_t line = 0);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Precondition violated by the caller (shape mismatch, bad config, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A required field is absent on some samples. Carries the offending ids.
class MissingFieldError : public Error {
public:
    MissingFieldError(const std::string& what, std::vector<std::string> ids);
    const std::vector<std::string>& ids() const noexcept { return ids_; }

private:
    std::vector<std::string> ids_;
};

/// Endpoint failure after retries were exhausted, or a non-retryable status.
class TransportError : public Error {
public:
    TransportError(const std::string& what, int status, bool retryable);
    int status() const noexcept { return status_; }
    bool retryable() const noexcept { return retryable_; }

private:
    int status_;
    bool retryable_;
};

class AuthError : public TransportError {
public:
    AuthError(const std::string& what, int status) : TransportError(what, status, false) {}
};

class CheckpointError : public Error {
public:
    using Error::Error;
};

/// Joins ids for error messages, truncating long lists.
std::string join_ids(const std::vector<std::string>& ids, std::size_t limit = 20);

}  // namespace argnet
