#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ctis {

/// Base class of every error the toolkit throws. The concrete subclass tells
/// callers (and the CLI exit-code mapping) which contract was violated.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes or lengths that do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A crop window or coordinate outside the source extent.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Duplicate, unordered or out-of-range band index.
class IndexError : public Error {
public:
    using Error::Error;
};

/// NaN/Inf or negative values where the math requires finite nonnegative ones.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Geometry too large for the index types.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration value (fractions, counts, flag combinations).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Score requested over an empty set of samples.
class EmptyReportError : public Error {
public:
    using Error::Error;
};

/// Malformed file or record stream. Carries the byte offset of the problem.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::uint64_t offset)
        : Error(what + " (at byte offset " + std::to_string(offset) + ")"), reason_(what), offset_(offset) {}

    [[nodiscard]] std::uint64_t offset() const noexcept { return offset_; }
    /// Message without the offset suffix, for rewrapping.
    [[nodiscard]] const std::string& reason() const noexcept { return reason_; }

private:
    std::string reason_;
    std::uint64_t offset_;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace ctis
