// Apache License, Version 2.0, refer to LICENSE.txt

// Plain-HTTP adapter for pulling live search results into fixture form. Kept
// out of every test path: responses are non-deterministic and rate-limited.

#include <chrono>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "newsrank/errors.hpp"
#include "newsrank/serank.hpp"

namespace newsrank {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string url_escape(const std::string& s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
        c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else if (c == ' ') {
      out += '+';
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 0xF];
    }
  }
  return out;
}

std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

LiveSearchClient::LiveSearchClient(std::string host, std::string path_template,
                                   std::filesystem::path cache_path)
    : host_(std::move(host)),
      path_template_(std::move(path_template)),
      cache_path_(std::move(cache_path)) {}

std::vector<std::string> LiveSearchClient::top_urls(const std::string& canonical_query) {
  // One outstanding request, spaced at least a second apart.
  std::int64_t now = now_ms();
  if (last_request_ms_ != 0 && now - last_request_ms_ < 1000) {
    std::this_thread::sleep_for(std::chrono::milliseconds(1000 - (now - last_request_ms_)));
  }
  last_request_ms_ = now_ms();

  std::string path = path_template_;
  std::size_t pos = path.find("{query}");
  if (pos == std::string::npos) throw ConfigError("path template lacks {query}: " + path);
  path.replace(pos, 7, url_escape(canonical_query));

  httplib::Client client(host_);
  client.set_connection_timeout(10);
  client.set_read_timeout(30);
  httplib::Result res = client.Get(path);
  if (!res) throw ClientUnavailable(host_ + path + ": " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw ClientUnavailable(host_ + path + ": HTTP " + std::to_string(res->status));
  }

  std::vector<std::string> urls;
  try {
    ordered_json doc = ordered_json::parse(res->body);
    urls = doc.get<std::vector<std::string>>();
  } catch (const ordered_json::exception& e) {
    throw ClientUnavailable(std::string("bad response body: ") + e.what());
  }
  if (urls.size() > 10) urls.resize(10);

  // Fold the response into the fixture cache so later runs can replay it.
  ordered_json cache = ordered_json::object();
  if (std::ifstream in(cache_path_); in) cache = ordered_json::parse(in, nullptr, false);
  if (!cache.is_object()) cache = ordered_json::object();
  cache[canonical_query] = urls;
  std::ofstream out(cache_path_);
  if (out) out << cache.dump(2) << '\n';

  return urls;
}

}  // namespace newsrank
