#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "splatdyn/refiner.hpp"

#include <chrono>
#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

namespace splatdyn {
namespace {

constexpr std::string_view kTaskTemplate =
    "Rewrite the prompt below for generating a single 3D object.\n"
    "Answer with one line in comma-separated format: first the target object, then its attributes "
    "(color, material, shape, parts, surface detail), each as a short phrase.\n"
    "Describe the object only. Omit background descriptions and any scene, setting or environment.\n"
    "Reply with the comma-separated line and nothing else.";

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

struct Url {
  std::string scheme_host_port;
  std::string path;
};

Url split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string token_from_env(const std::string& name) {
  if (name.empty()) return {};
  const char* v = std::getenv(name.c_str());
  return v ? std::string(v) : std::string();
}

std::string scrub(std::string s, const std::string& token) {
  if (token.empty()) return s;
  for (auto pos = s.find(token); pos != std::string::npos; pos = s.find(token, pos)) s.replace(pos, token.size(), "***");
  return s;
}

}  // namespace

RefinementInstruction build_instruction(std::string_view original) {
  if (trim(original).empty()) throw RefinerInputError("prompt is empty");
  RefinementInstruction ins;
  ins.context = std::string(original);
  ins.task = std::string(kTaskTemplate);
  ins.combined = ins.task + std::string(kInstructionDelimiter) + ins.context;
  return ins;
}

void RefinerConfig::validate() const {
  if (mode == RefinerMode::Offline) return;
  if (endpoint.rfind("http://", 0) != 0 && endpoint.rfind("https://", 0) != 0)
    throw ConfigError("refiner endpoint must be an http:// or https:// URL");
  if (model.empty()) throw ConfigError("refiner model must be set in online mode");
  if (!(timeout_seconds > 0.0)) throw ConfigError("refiner timeout must be > 0");
}

std::string chat_request_json(std::string_view model, std::string_view content) {
  nlohmann::ordered_json j;
  j["model"] = std::string(model);
  j["messages"] = nlohmann::ordered_json::array({{{"role", "user"}, {"content", std::string(content)}}});
  j["temperature"] = 0;
  return j.dump();
}

std::string parse_chat_response(std::string_view body) {
  const auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) throw RefinerResponseError("response is not JSON");
  if (!j.is_object() || !j.contains("choices") || !j["choices"].is_array() || j["choices"].empty())
    throw RefinerResponseError("response has no choices");
  const auto& first = j["choices"][0];
  if (!first.is_object() || !first.contains("message") || !first["message"].is_object() ||
      !first["message"].contains("content") || !first["message"]["content"].is_string())
    throw RefinerResponseError("choices[0].message.content missing or not a string");
  return std::string(trim(first["message"]["content"].get<std::string>()));
}

Refiner::Refiner(RefinerConfig config, LogSink log) : config_(std::move(config)), log_(std::move(log)) {
  config_.validate();
}

void Refiner::log(const std::string& line) const {
  if (log_) log_(scrub(line, token_from_env(config_.token_env)));
}

std::string Refiner::refine(std::string_view original) const {
  const auto instruction = build_instruction(original);
  if (config_.mode == RefinerMode::Offline) {
    log("refine: offline, prompt returned unchanged");
    return instruction.context;
  }

  const auto url = split_url(config_.endpoint);
  const auto token = token_from_env(config_.token_env);
  httplib::Client client(url.scheme_host_port);
  if (!client.is_valid()) throw RefinerNetworkError("cannot create a client for '" + url.scheme_host_port + "'");
  const auto secs = std::chrono::duration<double>(config_.timeout_seconds);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(secs);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  httplib::Headers headers;
  if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);
  log("refine: POST " + config_.endpoint + " model=" + config_.model +
      (token.empty() ? " (no token)" : " (bearer token from $" + config_.token_env + ")"));

  const auto start = std::chrono::steady_clock::now();
  const auto res = client.Post(url.path, headers, chat_request_json(config_.model, instruction.combined),
                               "application/json");
  const auto elapsed = std::chrono::steady_clock::now() - start;

  if (!res) {
    const auto err = res.error();
    const auto what = scrub("request to " + config_.endpoint + " failed: " + httplib::to_string(err), token);
    log("refine: " + what);
    if (err == httplib::Error::ConnectionTimeout || (err == httplib::Error::Read && elapsed >= secs * 0.9))
      throw RefinerTimeoutError(what);
    throw RefinerNetworkError(what);
  }
  log("refine: HTTP " + std::to_string(res->status));
  if (res->status < 200 || res->status >= 300)
    throw RefinerHttpError(res->status, "service returned HTTP " + std::to_string(res->status));
  try {
    return parse_chat_response(res->body);
  } catch (const RefinerResponseError& e) {
    log(std::string("refine: malformed response: ") + e.what());
    throw;
  }
}

RefineResult Refiner::refine_or_fallback(std::string_view original) const {
  RefineResult r;
  if (config_.mode == RefinerMode::Offline) {
    r.text = refine(original);
    return r;
  }
  try {
    r.text = refine(original);
    r.refined = true;
  } catch (const RefinerInputError&) {
    throw;
  } catch (const RefinerError& e) {
    if (!config_.fallback) throw;
    r.text = std::string(original);
    r.error = scrub(e.what(), token_from_env(config_.token_env));
    log("refine: falling back to the original prompt");
  }
  return r;
}

}  // namespace splatdyn
