// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace newsrank {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Corpus loading
struct MalformedRecord : Error {
  std::size_t line;
  MalformedRecord(std::size_t line_no, const std::string& reason)
      : Error("malformed record at line " + std::to_string(line_no) + ": " + reason),
        line(line_no) {}
};

struct DuplicateId : Error {
  explicit DuplicateId(const std::string& id) : Error("duplicate id: " + id) {}
};

struct UnknownSite : Error {
  explicit UnknownSite(const std::string& site) : Error("unknown site: " + site) {}
};

// Publisher classification
struct SingleClassTrainingSet : Error {
  SingleClassTrainingSet() : Error("training set contains a single class") {}
};

struct NoPositivePredictions : Error {
  NoPositivePredictions() : Error("no positive predictions; precision undefined") {}
};

// Event detection / language models
struct EmptyCorpus : Error {
  EmptyCorpus() : Error("empty corpus") {}
};

struct EmptyDocument : Error {
  explicit EmptyDocument(const std::string& id) : Error("empty document: " + id) {}
};

struct EmptyCluster : Error {
  explicit EmptyCluster(int event_id)
      : Error("empty cluster: event " + std::to_string(event_id)) {}
};

struct EmptyEventSet : Error {
  EmptyEventSet() : Error("no events available") {}
};

// Search-engine ranking
struct MalformedUrl : Error {
  explicit MalformedUrl(const std::string& url) : Error("malformed url: " + url) {}
};

struct MissingFixture : Error {
  explicit MissingFixture(const std::string& query)
      : Error("no fixture entry for query: \"" + query + "\"") {}
};

struct ClientUnavailable : Error {
  explicit ClientUnavailable(const std::string& why) : Error("search client unavailable: " + why) {}
};

// Pipeline configuration
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace newsrank
