#pragma once

#include <stdexcept>
#include <string>

namespace qbat {

/// Base of every error thrown by the library. `kind()` is a short stable tag
/// used by the CLI when printing machine-parsable error lines.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// Argument outside the domain of an operation (t outside [0, tau], tau <= 0, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain", what) {}
};

/// Precondition of a closed-form formula violated by the caller.
class ContractViolation : public Error {
public:
    explicit ContractViolation(const std::string& what) : Error("contract", what) {}
};

/// Closed-form eigenvectors are 0/0 at this point; use the numeric solver.
class FormulaSingular : public Error {
public:
    explicit FormulaSingular(const std::string& what) : Error("singular", what) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error("numeric", what) {}
};

class IntegrationDiverged : public Error {
public:
    IntegrationDiverged(double time, const std::string& what)
        : Error("diverged", what), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

class ParseError : public Error {
public:
    ParseError(std::string key, const std::string& what)
        : Error("parse", what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class ValidationError : public Error {
public:
    ValidationError(std::string key, const std::string& what)
        : Error("validation", what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace qbat
