// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace agentnet::bench {

enum class BenchmarkKind { Bbh, Math, ApiBank };

const char* to_string(BenchmarkKind kind) noexcept;
BenchmarkKind parse_benchmark_kind(std::string_view name);

struct TaskRecord {
    std::string id;
    std::string query;
    std::string gold;
    std::string category;
    std::optional<int> difficulty; // 1..3
    int priority = 0;

    bool operator==(const TaskRecord&) const = default;
};

struct SplitSpec {
    std::filesystem::path path;
    std::optional<std::size_t> count;
};

/// Describes one benchmark: its kind, allowed category labels, and the
/// record files per split.
struct DatasetManifest {
    BenchmarkKind kind = BenchmarkKind::Bbh;
    std::vector<std::string> labels;
    std::map<std::string, SplitSpec> splits;
    std::optional<std::filesystem::path> heuristics;
    std::filesystem::path base_dir;

    static DatasetManifest load(const std::filesystem::path& path);
};

/// Reads line-delimited JSON records. Blank lines are skipped. Errors name
/// the file and line; a missing field is reported by name. Categories are
/// checked against `labels` when it is non-empty.
std::vector<TaskRecord> load_records(const std::filesystem::path& path, const std::vector<std::string>& labels = {});

/// Loads one split and checks its size against the declared count.
std::vector<TaskRecord> load_dataset(const DatasetManifest& manifest, const std::string& split);

nlohmann::json record_to_json(const TaskRecord& record);
std::string serialize_records(const std::vector<TaskRecord>& records);
void write_records(const std::filesystem::path& path, const std::vector<TaskRecord>& records);

} // namespace agentnet::bench
