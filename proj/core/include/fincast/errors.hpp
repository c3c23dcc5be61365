#pragma once

#include <stdexcept>
#include <string>

namespace fincast {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Data acquisition / parsing
class ParseError : public Error {
public:
    using Error::Error;
};
class NoData : public Error {
public:
    using Error::Error;
};
class NetworkError : public Error {
public:
    using Error::Error;
};

/// Non-2xx HTTP response; carries the status code and the requested URL.
class HttpStatusError : public Error {
public:
    HttpStatusError(int status, std::string url)
        : Error("HTTP status " + std::to_string(status) + " from " + url),
          status_(status),
          url_(std::move(url)) {}
    int status() const { return status_; }
    const std::string& url() const { return url_; }

private:
    int status_;
    std::string url_;
};

// Numeric preconditions
class InsufficientData : public Error {
public:
    using Error::Error;
};
class DegenerateRange : public Error {
public:
    using Error::Error;
};
class SingularDesign : public Error {
public:
    using Error::Error;
};
class ShapeError : public Error {
public:
    using Error::Error;
};
class NonFiniteValue : public Error {
public:
    using Error::Error;
};

// Metrics
class LengthMismatch : public Error {
public:
    using Error::Error;
};
class ConstantActual : public Error {
public:
    using Error::Error;
};

// Plotting
class EmptySeries : public Error {
public:
    using Error::Error;
};

// Model persistence
class IoError : public Error {
public:
    using Error::Error;
};
class FormatVersionError : public Error {
public:
    using Error::Error;
};
class ChecksumError : public Error {
public:
    using Error::Error;
};

// Agents
class MissingPlaceholder : public Error {
public:
    using Error::Error;
};
class BackendError : public Error {
public:
    using Error::Error;
};
class ToolError : public Error {
public:
    using Error::Error;
};
class NoTasks : public Error {
public:
    using Error::Error;
};
class MalformedResponse : public Error {
public:
    using Error::Error;
};
class EmptyContent : public Error {
public:
    using Error::Error;
};

}  // namespace fincast
