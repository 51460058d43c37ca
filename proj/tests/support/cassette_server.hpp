// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The taxolint Authors
#pragma once

#include <atomic>
#include <thread>

#include <httplib.h>

#include "support/fixtures.hpp"

namespace taxolint::testing {

// Replays recorded wbgetentities responses from tests/data/cassettes.
class CassetteServer {
public:
    CassetteServer() {
        server_.Get("/w/api.php", [this](const httplib::Request& req, httplib::Response& res) {
            ++requests;
            last_query = req.params;
            if (rate_limit) {
                res.status = 429;
                return;
            }
            const auto ids = req.get_param_value("ids");
            const auto path = data_dir() / "cassettes" / (ids + ".json");
            if (!std::filesystem::exists(path)) {
                res.set_content(R"({"error":{"code":"no-such-entity","info":"not recorded"}})", "application/json");
                return;
            }
            res.set_content(read_file(path), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~CassetteServer() {
        server_.stop();
        thread_.join();
    }

    std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/w/api.php"; }

    std::atomic<int> requests{0};
    std::atomic<bool> rate_limit{false};
    httplib::Params last_query;

private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
};

}  // namespace taxolint::testing
