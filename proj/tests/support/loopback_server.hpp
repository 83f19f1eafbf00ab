// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <mutex>
#include <string>
#include <thread>

#include <httplib.h>

#include "core/backend.hpp"

namespace agentnet::testing {

/// OpenAI-shaped endpoints on 127.0.0.1 answered by another backend.
/// The first `fail_next` requests get `fail_status` instead of an answer.
class LoopbackServer {
public:
    explicit LoopbackServer(Backend& inner);
    ~LoopbackServer();
    LoopbackServer(const LoopbackServer&) = delete;
    LoopbackServer& operator=(const LoopbackServer&) = delete;

    std::string api_base() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }
    int port() const noexcept { return port_; }

    void fail_next(int count, int status = 503) {
        fail_status_ = status;
        fail_remaining_ = count;
    }
    int requests() const noexcept { return requests_; }
    std::string last_authorization() const;

private:
    bool inject_failure(httplib::Response& res);

    Backend& inner_;
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<int> fail_remaining_{0};
    std::atomic<int> fail_status_{503};
    std::atomic<int> requests_{0};
    mutable std::mutex auth_mutex_;
    std::string last_auth_;
};

} // namespace agentnet::testing
