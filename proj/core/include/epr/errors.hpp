#pragma once

#include <stdexcept>
#include <string>

namespace epr {

/// Base class of all errors thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Precondition or invariant violation on an in-memory value
/// (non-normalized amplitudes, out-of-range visibility, degenerate state, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Problem with external data: CSV parse failures, missing or duplicate
/// measurement settings, empty datasets. Messages carry line numbers or the
/// offending angles.
class DataError : public Error {
public:
    using Error::Error;
};

}  // namespace epr
