#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "hwbdd/scenario_forge.hpp"

namespace hwbdd::forge {

namespace {
constexpr int kTimeoutSeconds = 30;
}

std::string encode_request(const ProviderRequest& request) {
  nlohmann::ordered_json body;
  body["prompt"] = request.prompt;
  body["grammar"] = request.grammar;
  body["count"] = request.count;
  return body.dump();
}

std::string decode_response(std::string_view body) {
  const auto json = nlohmann::json::parse(body, nullptr, false);
  if (json.is_discarded() || !json.is_object())
    throw ProviderError("provider response is not a JSON object");
  const auto it = json.find("feature");
  if (it == json.end() || !it->is_string())
    throw ProviderError("provider response lacks a string \"feature\" member");
  return it->get<std::string>();
}

std::string stub_file_name(std::string_view prompt) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : prompt) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buf) + ".json";
}

StubProvider::StubProvider(std::string directory) : directory_(std::move(directory)) {}

std::string StubProvider::complete(const ProviderRequest& request) {
  const auto path = std::filesystem::path(directory_) / stub_file_name(request.prompt);
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ProviderError("no canned response " + path.string() + " for prompt '" +
                        request.prompt + "'");
  std::ostringstream body;
  body << in.rdbuf();
  return decode_response(body.str());
}

RemoteProvider::RemoteProvider(std::string endpoint, std::string key)
    : endpoint_(std::move(endpoint)), key_(std::move(key)) {}

RemoteProvider RemoteProvider::from_environment() {
  const char* endpoint = std::getenv("HWBDD_LLM_ENDPOINT");
  if (!endpoint || !*endpoint) throw ProviderError("HWBDD_LLM_ENDPOINT is not set");
  const char* key = std::getenv("HWBDD_LLM_KEY");
  return RemoteProvider(endpoint, key ? key : "");
}

std::string RemoteProvider::complete(const ProviderRequest& request) {
  // Split "scheme://host[:port]/path" into the client base and the path.
  const auto scheme_end = endpoint_.find("://");
  if (scheme_end == std::string::npos)
    throw ProviderError("endpoint '" + endpoint_ + "' has no scheme");
  const auto path_start = endpoint_.find('/', scheme_end + 3);
  const std::string base = endpoint_.substr(0, path_start);
  const std::string path =
      path_start == std::string::npos ? "/" : endpoint_.substr(path_start);

  httplib::Client client(base);
  client.set_connection_timeout(kTimeoutSeconds, 0);
  client.set_read_timeout(kTimeoutSeconds, 0);
  client.set_write_timeout(kTimeoutSeconds, 0);
  if (!client.is_valid()) throw ProviderError("cannot use endpoint '" + endpoint_ + "'");

  httplib::Headers headers;
  if (!key_.empty()) headers.emplace("Authorization", "Bearer " + key_);
  auto res = client.Post(path, headers, encode_request(request), "application/json");
  if (!res)
    throw ProviderError("request to " + endpoint_ + " failed: " +
                        httplib::to_string(res.error()));
  if (res->status != 200)
    throw ProviderError("provider returned HTTP " + std::to_string(res->status));
  return decode_response(res->body);
}

}  // namespace hwbdd::forge
