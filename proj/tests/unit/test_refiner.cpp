#include <gtest/gtest.h>

#include <cstdlib>
#include <json.hpp>

#include "mock_server.hpp"
#include "splatdyn/refiner.hpp"

using namespace splatdyn;
using splatdyn::testing::MockChatServer;

namespace {

constexpr const char* kTokenEnv = "SPLATDYN_TEST_REFINER_TOKEN";
constexpr const char* kToken = "sk-test-6f1d2c9a8b7e";

struct Captured {
  std::vector<std::string> lines;
  LogSink sink() {
    return [this](std::string_view l) { lines.emplace_back(l); };
  }
  bool mentions(const std::string& s) const {
    for (const auto& l : lines)
      if (l.find(s) != std::string::npos) return true;
    return false;
  }
};

RefinerConfig online(const std::string& url, double timeout = 5.0) {
  RefinerConfig c;
  c.mode = RefinerMode::Online;
  c.endpoint = url;
  c.model = "mock-model";
  c.token_env = kTokenEnv;
  c.timeout_seconds = timeout;
  return c;
}

class RefinerTest : public ::testing::Test {
 protected:
  void SetUp() override { setenv(kTokenEnv, kToken, 1); }
  void TearDown() override { unsetenv(kTokenEnv); }
};

}  // namespace

TEST(Instruction, ContainsPromptAndDirectives) {
  const auto ins = build_instruction("a red rose");
  EXPECT_EQ(ins.context, "a red rose");
  EXPECT_NE(ins.combined.find("a red rose"), std::string::npos);
  EXPECT_NE(ins.task.find("comma-separated"), std::string::npos);
  EXPECT_NE(ins.task.find("Omit background"), std::string::npos);
  EXPECT_EQ(ins.combined, ins.task + std::string(kInstructionDelimiter) + ins.context);
}

TEST(Instruction, Deterministic) { EXPECT_EQ(build_instruction("x y").combined, build_instruction("x y").combined); }

TEST(Instruction, EmptyRejected) {
  EXPECT_THROW(build_instruction(""), RefinerInputError);
  EXPECT_THROW(build_instruction(" \t\n"), RefinerInputError);
}

TEST(Instruction, PromptKeptVerbatimIncludingWhitespace) {
  const auto ins = build_instruction("  a cat, \"fluffy\"\n");
  EXPECT_EQ(ins.context, "  a cat, \"fluffy\"\n");
}

TEST(ChatJson, RequestShape) {
  const auto j = nlohmann::json::parse(chat_request_json("m", "hello"));
  EXPECT_EQ(j["model"], "m");
  ASSERT_EQ(j["messages"].size(), 1u);
  EXPECT_EQ(j["messages"][0]["role"], "user");
  EXPECT_EQ(j["messages"][0]["content"], "hello");
}

TEST(ChatJson, ResponseParsing) {
  EXPECT_EQ(parse_chat_response(R"({"choices":[{"message":{"content":"  hi \n"}}]})"), "hi");
  EXPECT_THROW(parse_chat_response("not json"), RefinerResponseError);
  EXPECT_THROW(parse_chat_response(R"({"choices":[]})"), RefinerResponseError);
  EXPECT_THROW(parse_chat_response(R"({"choices":[{"message":{"content":3}}]})"), RefinerResponseError);
}

TEST(Offline, Identity) {
  Refiner r(RefinerConfig{});
  EXPECT_EQ(r.refine("a red rose"), "a red rose");
  const auto res = r.refine_or_fallback("a red rose");
  EXPECT_EQ(res.text, "a red rose");
  EXPECT_FALSE(res.refined);
}

TEST(Config, OnlineNeedsEndpointAndModel) {
  RefinerConfig c;
  c.mode = RefinerMode::Online;
  EXPECT_THROW(c.validate(), ConfigError);
  c.endpoint = "ftp://x";
  c.model = "m";
  EXPECT_THROW(c.validate(), ConfigError);
  c.endpoint = "https://example.invalid/v1/chat/completions";
  EXPECT_NO_THROW(c.validate());
}

TEST_F(RefinerTest, MockRoundTrip) {
  MockChatServer server({200, MockChatServer::completion("rose, deep red petals, layered")});
  Captured log;
  Refiner r(online(server.url()), log.sink());
  EXPECT_EQ(r.refine("a red rose"), "rose, deep red petals, layered");

  const auto sent = nlohmann::json::parse(server.last_body());
  EXPECT_EQ(sent["model"], "mock-model");
  EXPECT_EQ(sent["messages"][0]["content"], build_instruction("a red rose").combined);
  EXPECT_EQ(server.last_auth(), std::string("Bearer ") + kToken);
  EXPECT_FALSE(log.lines.empty());
  EXPECT_FALSE(log.mentions(kToken));
}

TEST_F(RefinerTest, ServerErrorIsTyped) {
  MockChatServer server({500, R"({"error":"boom"})"});
  Captured log;
  Refiner r(online(server.url()), log.sink());
  try {
    r.refine("a red rose");
    FAIL();
  } catch (const RefinerHttpError& e) {
    EXPECT_EQ(e.status(), 500);
  }
  EXPECT_FALSE(log.mentions(kToken));
}

TEST_F(RefinerTest, MalformedResponse) {
  MockChatServer server({200, R"({"choices":"nope"})"});
  Refiner r(online(server.url()));
  EXPECT_THROW(r.refine("a red rose"), RefinerResponseError);
}

TEST_F(RefinerTest, Timeout) {
  MockChatServer server({200, MockChatServer::completion("late"), 1500});
  Refiner r(online(server.url(), 0.3));
  EXPECT_THROW(r.refine("a red rose"), RefinerTimeoutError);
}

TEST_F(RefinerTest, ConnectionRefused) {
  std::string url;
  {
    MockChatServer server({200, "{}"});
    url = server.url();
  }
  Refiner r(online(url, 1.0));
  EXPECT_THROW(r.refine("a red rose"), RefinerNetworkError);
}

TEST_F(RefinerTest, FallbackDegradesToOriginal) {
  MockChatServer server({503, "{}"});
  Captured log;
  Refiner r(online(server.url()), log.sink());
  const auto res = r.refine_or_fallback("a red rose");
  EXPECT_EQ(res.text, "a red rose");
  EXPECT_FALSE(res.refined);
  EXPECT_NE(res.error.find("503"), std::string::npos);
  EXPECT_FALSE(log.mentions(kToken));

  auto strict = online(server.url());
  strict.fallback = false;
  EXPECT_THROW(Refiner(strict).refine_or_fallback("a red rose"), RefinerHttpError);
}

TEST_F(RefinerTest, EchoedTokenIsScrubbedFromLogs) {
  MockChatServer server({200, R"({"choices":"echo )" + std::string(kToken) + R"("})"});
  Captured log;
  Refiner r(online(server.url()), log.sink());
  EXPECT_THROW(r.refine("a red rose"), RefinerResponseError);
  EXPECT_FALSE(log.mentions(kToken));
}

TEST_F(RefinerTest, ConcurrentCalls) {
  MockChatServer server({200, MockChatServer::completion("ok")});
  const Refiner r(online(server.url()));
  std::vector<std::thread> ts;
  std::atomic<int> good{0};
  for (int i = 0; i < 4; ++i)
    ts.emplace_back([&] {
      if (r.refine("prompt") == "ok") ++good;
    });
  for (auto& t : ts) t.join();
  EXPECT_EQ(good.load(), 4);
}
