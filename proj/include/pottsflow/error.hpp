#pragma once

#include <stdexcept>
#include <string>

namespace pottsflow {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad vertex id, dead edge, loop where a non-loop is required.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A generator vector violates the flow condition or has odd support degree.
class InvalidGenerator : public Error {
public:
    using Error::Error;
};

/// Parameter outside the range where a mixing bound (or estimator) applies.
/// Carries the threshold so callers can report it.
class OutOfRange : public Error {
public:
    OutOfRange(const std::string& what, double threshold)
        : Error(what), threshold_(threshold) {}

    double threshold() const noexcept { return threshold_; }

private:
    double threshold_;
};

/// Instance too large for exhaustive enumeration.
class TooLarge : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace pottsflow
