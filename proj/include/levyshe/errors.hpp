#pragma once

#include <stdexcept>
#include <string>

namespace levyshe {

/// Base error. `code()` is a stable machine-readable tag used by the CLI.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    [[nodiscard]] const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// An integral of the intensity measure is infinite.
class DivergentIntegral : public Error {
public:
    explicit DivergentIntegral(const std::string& message) : Error("divergent_integral", message) {}
};

/// Argument outside the operation's domain.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& message) : Error("domain_error", message) {}
};

/// Two independent evaluation routes disagree.
class ConsistencyError : public Error {
public:
    explicit ConsistencyError(const std::string& message) : Error("consistency_error", message) {}
};

/// Invalid configuration or input file.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& message) : Error("config_error", message) {}
};

} // namespace levyshe
