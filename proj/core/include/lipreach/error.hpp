#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace lipreach {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input document. `field()` is a JSON-pointer-like path.
class ParseError : public Error {
public:
    ParseError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Structurally inconsistent model (dimension mismatch, bad activation...).
class ValidationError : public Error {
public:
    static constexpr std::size_t kModelLevel = static_cast<std::size_t>(-1);

    ValidationError(std::size_t layer, const std::string& what)
        : Error(layer == kModelLevel ? what
                                     : "layer " + std::to_string(layer) + ": " + what),
          layer_(layer) {}

    std::size_t layer() const noexcept { return layer_; }

private:
    std::size_t layer_;
};

/// A caller broke a documented precondition.
class ContractError : public Error {
public:
    using Error::Error;
};

/// A requested structure cannot be transformed (e.g. unrolling).
class UnsupportedStructure : public Error {
public:
    using Error::Error;
};

/// Nothing matching the request exists (e.g. no adversarial witness).
class NotFoundError : public Error {
public:
    using Error::Error;
};

}  // namespace lipreach
