// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace agentnet {

enum class ErrorKind {
    InvalidConfiguration,
    OutOfRange,
    SelfLoop,
    MissingAgent,
    Shape,
    NoAgents,
    UnknownCategory,
    Extraction,
    Backend,
    ScriptUnderrun,
    Parse,
    Schema,
    Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised when a model reply cannot be parsed; keeps the raw text for diagnostics.
class ExtractionError : public Error {
public:
    ExtractionError(const std::string& message, std::string raw)
        : Error(ErrorKind::Extraction, message), raw_(std::move(raw)) {}

    const std::string& raw_response() const noexcept { return raw_; }

private:
    std::string raw_;
};

} // namespace agentnet
