#pragma once

#include <stdexcept>
#include <string>

namespace lzc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameters : public Error {
public:
    using Error::Error;
};

class RootIsolationFailure : public Error {
public:
    using Error::Error;
};

class PoleError : public Error {
public:
    using Error::Error;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

class DegeneracyError : public Error {
public:
    using Error::Error;
};

class SingularMatrixError : public Error {
public:
    using Error::Error;
};

class DegenerateRootError : public Error {
public:
    using Error::Error;
};

/// A probability fell outside [0, 1] by more than the rounding slack.
class ProbabilityRangeError : public Error {
public:
    using Error::Error;
};

class InvalidStart : public Error {
public:
    using Error::Error;
};

class StepLimitExceeded : public Error {
public:
    using Error::Error;
};

class NormDriftError : public Error {
public:
    using Error::Error;
};

class NotConverged : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace lzc
