// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace agentnet {

struct CompletionRequest {
    std::string system_prompt;
    std::string user_prompt;
    double temperature = 0.0;
    int max_tokens = 2048;
    double top_p = 1.0;
};

struct EmbeddingVector {
    std::vector<double> values;
    std::string model_id;
};

struct CallRecord {
    enum class Kind { Completion, Embedding };

    Kind kind = Kind::Completion;
    std::string system_prompt; // empty for embeddings
    std::string input;         // user prompt, or the embedded text
    std::string output;        // reply text, or "dim=<n>" for embeddings
    bool ok = true;
    std::string error;
};

/// Model provider seen by the runtime. Public calls validate their input,
/// delegate to the provider hook and append to the call log; the log is
/// ordered by arrival and safe under concurrent calls.
class Backend {
public:
    virtual ~Backend() = default;

    std::string complete(const CompletionRequest& request);
    EmbeddingVector embed(std::string_view text);

    std::vector<CallRecord> call_log() const;
    std::size_t completion_calls() const;
    std::size_t embedding_calls() const;

protected:
    virtual std::string do_complete(const CompletionRequest& request) = 0;
    virtual EmbeddingVector do_embed(std::string_view text) = 0;

private:
    void append(CallRecord record);

    mutable std::mutex log_mutex_;
    std::vector<CallRecord> log_;
};

} // namespace agentnet
