#pragma once

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <atomic>
#include <chrono>
#include <mutex>
#include <string>
#include <thread>

namespace splatdyn::testing {

// Local chat-completion endpoint on 127.0.0.1 with a canned reply.
class MockChatServer {
 public:
  struct Reply {
    int status = 200;
    std::string body;
    int delay_ms = 0;
  };

  explicit MockChatServer(Reply reply) : reply_(std::move(reply)) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      {
        std::lock_guard lock(mu_);
        last_body_ = req.body;
        last_auth_ = req.get_header_value("Authorization");
        ++requests_;
      }
      if (reply_.delay_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(reply_.delay_ms));
      res.status = reply_.status;
      res.set_content(reply_.body, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~MockChatServer() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  static std::string completion(const std::string& text) {
    return R"({"id":"mock","object":"chat.completion","choices":[{"index":0,"message":{"role":"assistant","content":)" +
           json_quote(text) + R"(},"finish_reason":"stop"}]})";
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions"; }
  std::string last_body() const {
    std::lock_guard lock(mu_);
    return last_body_;
  }
  std::string last_auth() const {
    std::lock_guard lock(mu_);
    return last_auth_;
  }
  int requests() const {
    std::lock_guard lock(mu_);
    return requests_;
  }

 private:
  static std::string json_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  }

  Reply reply_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  mutable std::mutex mu_;
  std::string last_body_;
  std::string last_auth_;
  int requests_ = 0;
};

}  // namespace splatdyn::testing
