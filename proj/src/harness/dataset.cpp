// SPDX-License-Identifier: Apache-2.0
#include "dataset.hpp"

#include <algorithm>
#include <fstream>

#include "core/error.hpp"

namespace agentnet::bench {

const char* to_string(BenchmarkKind kind) noexcept {
    switch (kind) {
    case BenchmarkKind::Bbh: return "bbh";
    case BenchmarkKind::Math: return "math";
    case BenchmarkKind::ApiBank: return "api-bank";
    }
    return "unknown";
}

BenchmarkKind parse_benchmark_kind(std::string_view name) {
    if (name == "bbh")
        return BenchmarkKind::Bbh;
    if (name == "math")
        return BenchmarkKind::Math;
    if (name == "api-bank" || name == "apibank")
        return BenchmarkKind::ApiBank;
    throw Error(ErrorKind::InvalidConfiguration, "unknown benchmark kind '" + std::string(name) + "'");
}

DatasetManifest DatasetManifest::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open dataset manifest " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
    }
    DatasetManifest m;
    m.base_dir = path.parent_path();
    try {
        m.kind = parse_benchmark_kind(doc.at("benchmark").get<std::string>());
        m.labels = doc.value("labels", std::vector<std::string>{});
        for (const auto& [name, spec] : doc.at("splits").items()) {
            SplitSpec s;
            s.path = m.base_dir / spec.at("path").get<std::string>();
            if (spec.contains("count"))
                s.count = spec.at("count").get<std::size_t>();
            m.splits.emplace(name, std::move(s));
        }
        if (doc.contains("heuristics"))
            m.heuristics = m.base_dir / doc.at("heuristics").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Schema, path.string() + ": " + e.what());
    }
    return m;
}

std::vector<TaskRecord> load_records(const std::filesystem::path& path, const std::vector<std::string>& labels) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open dataset " + path.string());
    std::vector<TaskRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(ErrorKind::Parse, where + ": " + e.what());
        }
        if (!doc.is_object())
            throw Error(ErrorKind::Schema, where + ": record is not an object");
        auto text_field = [&](const char* name) {
            if (!doc.contains(name))
                throw Error(ErrorKind::Schema, where + ": missing field '" + name + "'");
            if (!doc[name].is_string())
                throw Error(ErrorKind::Schema, where + ": field '" + name + "' must be a string");
            return doc[name].get<std::string>();
        };
        TaskRecord r;
        r.id = doc.contains("id") && doc["id"].is_number_integer() ? std::to_string(doc["id"].get<long long>())
                                                                   : text_field("id");
        r.query = text_field("query");
        r.gold = text_field("gold");
        r.category = text_field("category");
        if (r.query.empty())
            throw Error(ErrorKind::Schema, where + ": field 'query' is empty");
        if (r.gold.empty())
            throw Error(ErrorKind::Schema, where + ": field 'gold' is empty");
        if (doc.contains("difficulty") && !doc["difficulty"].is_null()) {
            if (!doc["difficulty"].is_number_integer())
                throw Error(ErrorKind::Schema, where + ": field 'difficulty' must be an integer");
            const int d = doc["difficulty"].get<int>();
            if (d < 1 || d > 3)
                throw Error(ErrorKind::Schema, where + ": field 'difficulty' must be 1, 2 or 3");
            r.difficulty = d;
        }
        if (doc.contains("priority")) {
            if (!doc["priority"].is_number_integer())
                throw Error(ErrorKind::Schema, where + ": field 'priority' must be an integer");
            r.priority = doc["priority"].get<int>();
        }
        if (!labels.empty() && std::find(labels.begin(), labels.end(), r.category) == labels.end())
            throw Error(ErrorKind::Schema, where + ": category '" + r.category + "' is not a declared label");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<TaskRecord> load_dataset(const DatasetManifest& manifest, const std::string& split) {
    auto it = manifest.splits.find(split);
    if (it == manifest.splits.end())
        throw Error(ErrorKind::Schema, "manifest declares no '" + split + "' split");
    auto records = load_records(it->second.path, manifest.labels);
    if (it->second.count && *it->second.count != records.size())
        throw Error(ErrorKind::Schema, "split '" + split + "' declares " + std::to_string(*it->second.count) +
                                           " records, found " + std::to_string(records.size()));
    return records;
}

nlohmann::json record_to_json(const TaskRecord& r) {
    nlohmann::json doc = {{"id", r.id}, {"query", r.query}, {"gold", r.gold}, {"category", r.category}};
    if (r.difficulty)
        doc["difficulty"] = *r.difficulty;
    if (r.priority != 0)
        doc["priority"] = r.priority;
    return doc;
}

std::string serialize_records(const std::vector<TaskRecord>& records) {
    std::string out;
    for (const auto& r : records)
        out += record_to_json(r).dump() + "\n";
    return out;
}

void write_records(const std::filesystem::path& path, const std::vector<TaskRecord>& records) {
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << serialize_records(records);
}

} // namespace agentnet::bench
