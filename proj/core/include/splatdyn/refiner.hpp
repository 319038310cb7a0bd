#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "splatdyn/error.hpp"

namespace splatdyn {

// Template revision; bump whenever the task text changes (docs/refiner.md).
inline constexpr int kInstructionTemplateVersion = 1;
inline constexpr std::string_view kInstructionDelimiter = "\n---\n";

struct RefinementInstruction {
  std::string context;   // the original prompt, verbatim
  std::string task;      // fixed template text
  std::string combined;  // task + delimiter + context
};

// Throws RefinerInputError when `original` is empty after trimming.
RefinementInstruction build_instruction(std::string_view original);

class RefinerError : public Error {
 public:
  using Error::Error;
};
class RefinerInputError : public RefinerError {
 public:
  using RefinerError::RefinerError;
};
class RefinerNetworkError : public RefinerError {
 public:
  using RefinerError::RefinerError;
};
class RefinerTimeoutError : public RefinerError {
 public:
  using RefinerError::RefinerError;
};
class RefinerHttpError : public RefinerError {
 public:
  RefinerHttpError(int status, const std::string& what) : RefinerError(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};
class RefinerResponseError : public RefinerError {
 public:
  using RefinerError::RefinerError;
};

enum class RefinerMode { Online, Offline };

struct RefinerConfig {
  RefinerMode mode = RefinerMode::Offline;
  std::string endpoint;  // full URL, e.g. https://host/v1/chat/completions
  std::string model;
  std::string token_env = "SPLATDYN_REFINER_TOKEN";  // variable holding the bearer token
  double timeout_seconds = 30.0;
  bool fallback = true;  // refine_or_fallback degrades to offline on failure

  // Offline needs nothing; online needs an http(s) endpoint, a model and a
  // positive timeout. Throws ConfigError.
  void validate() const;
};

struct RefineResult {
  std::string text;
  bool refined = false;  // false: offline mode or fallback after an error
  std::string error;     // why the fallback happened, token-free
};

// Receives one line per request event. Lines never contain the token.
using LogSink = std::function<void(std::string_view)>;

class Refiner {
 public:
  explicit Refiner(RefinerConfig config, LogSink log = {});

  const RefinerConfig& config() const noexcept { return config_; }

  // Online: one chat-completion POST, returns the first choice's message
  // text, trimmed. Offline: `original` unchanged. Throws the typed
  // RefinerError subclasses.
  std::string refine(std::string_view original) const;

  // refine(), except that with `fallback` set any service failure yields
  // the original prompt with refined = false.
  RefineResult refine_or_fallback(std::string_view original) const;

 private:
  void log(const std::string& line) const;

  RefinerConfig config_;
  LogSink log_;
};

// Request body for `model` and one user message, as documented.
std::string chat_request_json(std::string_view model, std::string_view content);
// First choice's message content, trimmed. Throws RefinerResponseError.
std::string parse_chat_response(std::string_view body);

}  // namespace splatdyn
