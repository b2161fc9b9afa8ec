// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace newsrank {

enum class TextMode { tweet, article };
enum class StemmerKind { none, porter_like };

StemmerKind stemmer_from_string(std::string_view s);
std::string_view to_string(StemmerKind kind);

struct PreprocessOptions {
  StemmerKind stemmer = StemmerKind::none;
};

// Lowercased word tokens split on non-alphanumeric boundaries. Tweet mode
// additionally drops URL tokens and @mentions and strips the leading '#'
// from hashtags. Pure-digit tokens are dropped in both modes.
std::vector<std::string> normalize_and_tokenize(std::string_view text, TextMode mode);

class StopwordSet {
 public:
  StopwordSet() = default;
  explicit StopwordSet(std::set<std::string> terms);

  // One lowercase term per line, UTF-8. '#'-prefixed lines are comments.
  static StopwordSet load(const std::filesystem::path& path);

  bool contains(const std::string& term) const { return terms_.count(term) > 0; }
  std::size_t size() const { return terms_.size(); }
  // FNV-1a over the sorted term list; recorded in run provenance.
  std::uint64_t content_hash() const { return hash_; }

 private:
  std::set<std::string> terms_;
  std::uint64_t hash_ = 0;
};

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const StopwordSet& stopwords);

// Suffix-stripping stemmer (plural/participle endings); a lightweight stand-in
// for full lemmatization, off by default.
std::string stem_porter_like(const std::string& word);

struct TokenizedDoc {
  std::string source_id;
  std::vector<std::string> tokens;
  std::map<std::string, std::int64_t> term_counts;

  static TokenizedDoc from_tokens(std::string source_id, std::vector<std::string> tokens);
  bool empty() const { return tokens.empty(); }
};

// Full per-document pipeline: tokenize, drop stopwords, optionally stem.
TokenizedDoc preprocess_doc(std::string source_id, std::string_view text, TextMode mode,
                            const StopwordSet& stopwords, const PreprocessOptions& options = {});

class Vocabulary {
 public:
  Vocabulary() = default;

  // Terms are indexed in lexicographic order, so the mapping is independent
  // of document order.
  static Vocabulary build(std::span<const TokenizedDoc> docs);

  int size() const { return static_cast<int>(terms_.size()); }
  int index_of(const std::string& term) const;  // -1 if absent
  const std::string& term_at(int index) const { return terms_.at(static_cast<std::size_t>(index)); }
  const std::vector<std::string>& terms() const { return terms_; }

 private:
  std::vector<std::string> terms_;
  std::map<std::string, int> index_;
};

}  // namespace newsrank
