#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gaseq {

/// Invalid argument to a library operation (bad length, bad probability, ...).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Lag or index outside its admissible interval.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Two vectors that must share a length do not.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Invalid GA or experiment configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Output could not be written or input file could not be read.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed code text. `token()` is the 1-based token position, 0 when the
/// error is not tied to a single token.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t token)
        : std::runtime_error(what), token_(token) {}

    std::size_t token() const noexcept { return token_; }

private:
    std::size_t token_;
};

}  // namespace gaseq
