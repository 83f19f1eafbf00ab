// SPDX-License-Identifier: Apache-2.0
#include "backend.hpp"

#include <algorithm>

#include "error.hpp"

namespace agentnet {

std::string Backend::complete(const CompletionRequest& request) {
    if (request.user_prompt.empty())
        throw Error(ErrorKind::Backend, "completion request has an empty user prompt");
    CallRecord record;
    record.kind = CallRecord::Kind::Completion;
    record.system_prompt = request.system_prompt;
    record.input = request.user_prompt;
    try {
        record.output = do_complete(request);
    } catch (const Error& e) {
        record.ok = false;
        record.error = e.what();
        append(std::move(record));
        throw;
    }
    std::string reply = record.output;
    append(std::move(record));
    return reply;
}

EmbeddingVector Backend::embed(std::string_view text) {
    if (text.empty())
        throw Error(ErrorKind::Backend, "cannot embed empty text");
    CallRecord record;
    record.kind = CallRecord::Kind::Embedding;
    record.input = std::string(text);
    try {
        EmbeddingVector vec = do_embed(text);
        record.output = "dim=" + std::to_string(vec.values.size());
        append(std::move(record));
        return vec;
    } catch (const Error& e) {
        record.ok = false;
        record.error = e.what();
        append(std::move(record));
        throw;
    }
}

void Backend::append(CallRecord record) {
    std::lock_guard lock(log_mutex_);
    log_.push_back(std::move(record));
}

std::vector<CallRecord> Backend::call_log() const {
    std::lock_guard lock(log_mutex_);
    return log_;
}

std::size_t Backend::completion_calls() const {
    std::lock_guard lock(log_mutex_);
    return static_cast<std::size_t>(std::count_if(log_.begin(), log_.end(), [](const CallRecord& r) {
        return r.kind == CallRecord::Kind::Completion;
    }));
}

std::size_t Backend::embedding_calls() const {
    std::lock_guard lock(log_mutex_);
    return static_cast<std::size_t>(std::count_if(log_.begin(), log_.end(), [](const CallRecord& r) {
        return r.kind == CallRecord::Kind::Embedding;
    }));
}

} // namespace agentnet
