#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace honeytrap {

/// Base of every error thrown by the library. The category tells callers
/// (the CLI in particular) whether the fault lies with the input or with
/// the environment.
class Error : public std::runtime_error {
public:
    enum class Category { Input, Environment };

    explicit Error(const std::string& what, Category category = Category::Input)
        : std::runtime_error(what), category_(category) {}

    [[nodiscard]] Category category() const noexcept { return category_; }

private:
    Category category_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed text input. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line);

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Valid syntax that uses a construct this library deliberately does not handle.
class UnsupportedFeatureError : public ParseError {
public:
    using ParseError::ParseError;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class TypeError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class TrainingError : public Error {
public:
    using Error::Error;
};

class StratificationError : public Error {
public:
    using Error::Error;
};

class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what, Category::Environment) {}
};

}  // namespace honeytrap
