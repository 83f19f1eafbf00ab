// SPDX-License-Identifier: Apache-2.0
#include "error.hpp"

namespace agentnet {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidConfiguration: return "invalid-configuration";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::SelfLoop: return "self-loop";
    case ErrorKind::MissingAgent: return "missing-agent";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::NoAgents: return "no-agents";
    case ErrorKind::UnknownCategory: return "unknown-category";
    case ErrorKind::Extraction: return "extraction";
    case ErrorKind::Backend: return "backend";
    case ErrorKind::ScriptUnderrun: return "script-underrun";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Io: return "io";
    }
    return "unknown";
}

} // namespace agentnet
