// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "dataset.hpp"

namespace agentnet::bench {

/// Returns 1 when `answer` matches `gold` under the benchmark's
/// normalization, else 0.
int evaluate(BenchmarkKind kind, std::string_view answer, std::string_view gold);
int evaluate(std::string_view kind, std::string_view answer, std::string_view gold);

// Normalizers, exposed for tests.
std::string normalize_option(std::string_view text);
std::string normalize_math(std::string_view text);

struct ApiCall {
    std::string name;
    std::map<std::string, std::string> arguments;
    bool operator==(const ApiCall&) const = default;
};

/// Accepts `Name(key=value, ...)`, optionally wrapped in `API-Request: [...]`,
/// or a JSON object with api_name and parameters.
std::optional<ApiCall> parse_api_call(std::string_view text);

} // namespace agentnet::bench
