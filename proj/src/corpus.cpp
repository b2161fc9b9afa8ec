// Apache License, Version 2.0, refer to LICENSE.txt

#include "newsrank/corpus.hpp"

#include <fstream>
#include <unordered_set>

#include <json.hpp>

namespace newsrank {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(UserLabel label) {
  return label == UserLabel::publisher ? "publisher" : "other";
}

UserLabel user_label_from_string(std::string_view s) {
  if (s == "publisher") return UserLabel::publisher;
  if (s == "other") return UserLabel::other;
  throw Error("unknown user label: " + std::string(s));
}

SiteRegistry::SiteRegistry(std::vector<SiteId> sites) : sites_(std::move(sites)) {
  std::unordered_set<std::string> seen;
  for (const SiteId& site : sites_) {
    if (site.name.empty()) throw ConfigError("site with empty name in registry");
    if (!seen.insert(site.name).second) throw ConfigError("duplicate site name: " + site.name);
  }
}

const SiteId* SiteRegistry::find(std::string_view name) const {
  for (const SiteId& site : sites_) {
    if (site.name == name) return &site;
  }
  return nullptr;
}

std::vector<std::string> SiteRegistry::names() const {
  std::vector<std::string> out;
  out.reserve(sites_.size());
  for (const SiteId& site : sites_) out.push_back(site.name);
  return out;
}

namespace {

// Walks a JSONL file, parsing each non-empty line and invoking the handler.
// Line numbers are 1-based in error reports.
template <class Handler>
void for_each_record(const std::filesystem::path& path, Handler&& handler) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw MalformedRecord(line_no, e.what());
    }
    if (!record.is_object()) throw MalformedRecord(line_no, "record is not a JSON object");
    handler(record, line_no);
  }
}

std::string require_string(const json& record, const char* key, std::size_t line_no) {
  auto it = record.find(key);
  if (it == record.end()) throw MalformedRecord(line_no, std::string("missing field: ") + key);
  if (!it->is_string()) throw MalformedRecord(line_no, std::string(key) + " is not a string");
  return it->get<std::string>();
}

std::int64_t require_int(const json& record, const char* key, std::size_t line_no) {
  auto it = record.find(key);
  if (it == record.end()) throw MalformedRecord(line_no, std::string("missing field: ") + key);
  if (!it->is_number_integer()) throw MalformedRecord(line_no, std::string(key) + " is not an integer");
  return it->get<std::int64_t>();
}

std::int64_t require_count(const json& record, const char* key, std::size_t line_no) {
  std::int64_t v = require_int(record, key, line_no);
  if (v < 0) throw MalformedRecord(line_no, std::string(key) + " is negative");
  return v;
}

bool require_bool(const json& record, const char* key, std::size_t line_no) {
  auto it = record.find(key);
  if (it == record.end()) throw MalformedRecord(line_no, std::string("missing field: ") + key);
  if (!it->is_boolean()) throw MalformedRecord(line_no, std::string(key) + " is not a boolean");
  return it->get<bool>();
}

void write_lines(const std::filesystem::path& path, const std::vector<ordered_json>& records) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path.string());
  for (const ordered_json& record : records) out << record.dump() << '\n';
}

}  // namespace

std::vector<Tweet> load_tweets(const std::filesystem::path& path) {
  std::vector<Tweet> tweets;
  std::unordered_set<std::string> ids;
  for_each_record(path, [&](const json& record, std::size_t line_no) {
    Tweet t;
    t.id = require_string(record, "id", line_no);
    if (t.id.empty()) throw MalformedRecord(line_no, "id is empty");
    t.user_id = require_string(record, "user_id", line_no);
    t.text = require_string(record, "text", line_no);
    t.created_at = require_count(record, "created_at", line_no);
    if (!ids.insert(t.id).second) throw DuplicateId(t.id);
    tweets.push_back(std::move(t));
  });
  return tweets;
}

std::vector<UserProfile> load_user_profiles(const std::filesystem::path& path) {
  std::vector<UserProfile> users;
  std::unordered_set<std::string> ids;
  for_each_record(path, [&](const json& record, std::size_t line_no) {
    UserProfile u;
    u.user_id = require_string(record, "user_id", line_no);
    if (u.user_id.empty()) throw MalformedRecord(line_no, "user_id is empty");
    u.username = require_string(record, "username", line_no);
    u.description = require_string(record, "description", line_no);
    u.followers = require_count(record, "followers", line_no);
    u.following = require_count(record, "following", line_no);
    u.tweets_count = require_count(record, "tweets_count", line_no);
    u.favourites_count = require_count(record, "favourites_count", line_no);
    u.listed_count = require_count(record, "listed_count", line_no);
    u.verified = require_bool(record, "verified", line_no);
    u.has_url = require_bool(record, "has_url", line_no);
    if (auto it = record.find("label"); it != record.end() && !it->is_null()) {
      if (!it->is_string()) throw MalformedRecord(line_no, "label is not a string");
      try {
        u.label = user_label_from_string(it->get<std::string>());
      } catch (const Error& e) {
        throw MalformedRecord(line_no, e.what());
      }
    }
    if (!ids.insert(u.user_id).second) throw DuplicateId(u.user_id);
    users.push_back(std::move(u));
  });
  return users;
}

std::vector<NewsArticle> load_articles(const std::filesystem::path& path,
                                       const SiteRegistry& registry, bool strict) {
  std::vector<NewsArticle> articles;
  std::unordered_set<std::string> ids;
  for_each_record(path, [&](const json& record, std::size_t line_no) {
    NewsArticle a;
    a.id = require_string(record, "id", line_no);
    if (a.id.empty()) throw MalformedRecord(line_no, "id is empty");
    a.site = require_string(record, "site", line_no);
    if (a.site.empty()) throw MalformedRecord(line_no, "site is empty");
    a.url = require_string(record, "url", line_no);
    a.title = require_string(record, "title", line_no);
    a.body = require_string(record, "body", line_no);
    a.published_at = require_count(record, "published_at", line_no);
    if (registry.find(a.site) == nullptr) {
      if (strict) throw UnknownSite(a.site);
      a.site = "OTHER";
    }
    if (!ids.insert(a.id).second) throw DuplicateId(a.id);
    articles.push_back(std::move(a));
  });
  return articles;
}

void save_tweets(const std::filesystem::path& path, const std::vector<Tweet>& tweets) {
  std::vector<ordered_json> records;
  records.reserve(tweets.size());
  for (const Tweet& t : tweets) {
    records.push_back(ordered_json{
        {"id", t.id}, {"user_id", t.user_id}, {"text", t.text}, {"created_at", t.created_at}});
  }
  write_lines(path, records);
}

void save_user_profiles(const std::filesystem::path& path,
                        const std::vector<UserProfile>& users) {
  std::vector<ordered_json> records;
  records.reserve(users.size());
  for (const UserProfile& u : users) {
    ordered_json record{{"user_id", u.user_id},
                        {"username", u.username},
                        {"description", u.description},
                        {"followers", u.followers},
                        {"following", u.following},
                        {"tweets_count", u.tweets_count},
                        {"favourites_count", u.favourites_count},
                        {"listed_count", u.listed_count},
                        {"verified", u.verified},
                        {"has_url", u.has_url}};
    if (u.label) record["label"] = std::string(to_string(*u.label));
    records.push_back(std::move(record));
  }
  write_lines(path, records);
}

void save_articles(const std::filesystem::path& path,
                   const std::vector<NewsArticle>& articles) {
  std::vector<ordered_json> records;
  records.reserve(articles.size());
  for (const NewsArticle& a : articles) {
    records.push_back(ordered_json{{"id", a.id},
                                   {"site", a.site},
                                   {"url", a.url},
                                   {"title", a.title},
                                   {"body", a.body},
                                   {"published_at", a.published_at}});
  }
  write_lines(path, records);
}

std::vector<Tweet> filter_window(const std::vector<Tweet>& tweets, TimeWindow w) {
  return filter_window(tweets, w, [](const Tweet& t) { return t.created_at; });
}

std::vector<NewsArticle> filter_window(const std::vector<NewsArticle>& articles, TimeWindow w) {
  return filter_window(articles, w, [](const NewsArticle& a) { return a.published_at; });
}

}  // namespace newsrank
