// Apache License, Version 2.0, refer to LICENSE.txt

#include "newsrank/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "newsrank/errors.hpp"

namespace newsrank {

StemmerKind stemmer_from_string(std::string_view s) {
  if (s == "none") return StemmerKind::none;
  if (s == "porter-like") return StemmerKind::porter_like;
  throw ConfigError("unknown stemmer: " + std::string(s));
}

std::string_view to_string(StemmerKind kind) {
  return kind == StemmerKind::none ? "none" : "porter-like";
}

namespace {

bool is_ascii_digit(unsigned char c) { return c >= '0' && c <= '9'; }
bool is_ascii_alpha(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

char ascii_lower(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return (u >= 'A' && u <= 'Z') ? static_cast<char>(u - 'A' + 'a') : c;
}

struct CodePoint {
  std::uint32_t value = 0;
  std::size_t size = 1;
};

CodePoint decode_utf8(std::string_view s, std::size_t i) {
  unsigned char b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&s](std::size_t j) {
    return j < s.size() && (static_cast<unsigned char>(s[j]) & 0xC0) == 0x80;
  };
  if (b0 < 0x80) return {b0, 1};
  if ((b0 & 0xE0) == 0xC0 && cont(i + 1)) {
    return {static_cast<std::uint32_t>((b0 & 0x1F) << 6 |
                                       (static_cast<unsigned char>(s[i + 1]) & 0x3F)),
            2};
  }
  if ((b0 & 0xF0) == 0xE0 && cont(i + 1) && cont(i + 2)) {
    return {static_cast<std::uint32_t>((b0 & 0x0F) << 12 |
                                       (static_cast<unsigned char>(s[i + 1]) & 0x3F) << 6 |
                                       (static_cast<unsigned char>(s[i + 2]) & 0x3F)),
            3};
  }
  if ((b0 & 0xF8) == 0xF0 && cont(i + 1) && cont(i + 2) && cont(i + 3)) {
    return {static_cast<std::uint32_t>((b0 & 0x07) << 18 |
                                       (static_cast<unsigned char>(s[i + 1]) & 0x3F) << 12 |
                                       (static_cast<unsigned char>(s[i + 2]) & 0x3F) << 6 |
                                       (static_cast<unsigned char>(s[i + 3]) & 0x3F)),
            4};
  }
  return {0xFFFD, 1};  // stray byte
}

// Word characters: ASCII alphanumerics plus non-ASCII code points outside
// the common punctuation blocks (Latin-1 punctuation/symbols and General
// Punctuation: dashes, curly quotes, ellipsis).
bool is_word_cp(std::uint32_t cp) {
  if (cp < 0x80) {
    return is_ascii_alpha(static_cast<unsigned char>(cp)) ||
           is_ascii_digit(static_cast<unsigned char>(cp));
  }
  if (cp >= 0x00A0 && cp <= 0x00BF) return false;
  if (cp >= 0x2000 && cp <= 0x206F) return false;
  return true;
}

std::string lowercased(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), ascii_lower);
  return out;
}

bool all_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(),
                     [](char c) { return is_ascii_digit(static_cast<unsigned char>(c)); });
}

// URL pattern: an http/https scheme or a t.co host.
bool looks_like_url(std::string_view raw) {
  std::string s = lowercased(raw);
  if (s.starts_with("http://") || s.starts_with("https://")) return true;
  std::string_view host(s);
  if (auto slash = host.find('/'); slash != std::string_view::npos) host = host.substr(0, slash);
  return host == "t.co";
}

void append_word_runs(std::string_view raw, std::vector<std::string>& out) {
  std::string token;
  auto flush = [&token, &out] {
    if (!token.empty() && !all_digits(token)) out.push_back(token);
    token.clear();
  };
  std::size_t i = 0;
  while (i < raw.size()) {
    CodePoint cp = decode_utf8(raw, i);
    if (is_word_cp(cp.value)) {
      for (std::size_t j = 0; j < cp.size; ++j) token += ascii_lower(raw[i + j]);
    } else {
      flush();
    }
    i += cp.size;
  }
  flush();
}

}  // namespace

std::vector<std::string> normalize_and_tokenize(std::string_view text, TextMode mode) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t begin = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i == begin) continue;
    std::string_view raw = text.substr(begin, i - begin);
    if (mode == TextMode::tweet) {
      if (raw.front() == '@') continue;
      if (looks_like_url(raw)) continue;
      if (raw.front() == '#') raw.remove_prefix(1);
    }
    append_word_runs(raw, tokens);
  }
  return tokens;
}

namespace {

std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 14695981039346656037ULL) {
  std::uint64_t h = seed;
  for (char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t hash_terms(const std::set<std::string>& terms) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const std::string& term : terms) {
    h = fnv1a(term, h);
    h = fnv1a("\n", h);
  }
  return h;
}

}  // namespace

StopwordSet::StopwordSet(std::set<std::string> terms)
    : terms_(std::move(terms)), hash_(hash_terms(terms_)) {}

StopwordSet StopwordSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stopword list: " + path.string());
  std::set<std::string> terms;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    terms.insert(lowercased(line));
  }
  return StopwordSet(std::move(terms));
}

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const StopwordSet& stopwords) {
  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  for (const std::string& token : tokens) {
    if (!stopwords.contains(token)) kept.push_back(token);
  }
  return kept;
}

namespace {

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool has_vowel(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return is_vowel(c) || c == 'y'; });
}

bool ends_with(std::string_view s, std::string_view suffix) { return s.ends_with(suffix); }

}  // namespace

std::string stem_porter_like(const std::string& word) {
  std::string s = word;
  if (s.size() <= 3) return s;

  // Plurals.
  if (ends_with(s, "sses")) {
    s.resize(s.size() - 2);
  } else if (ends_with(s, "ies")) {
    s.resize(s.size() - 2);
  } else if (!ends_with(s, "ss") && ends_with(s, "s")) {
    s.resize(s.size() - 1);
  }

  // Past/progressive endings, only when a vowel remains in the stem.
  auto strip_ending = [&s](std::string_view suffix) {
    if (s.size() > suffix.size() + 2 && ends_with(s, suffix) &&
        has_vowel(std::string_view(s).substr(0, s.size() - suffix.size()))) {
      s.resize(s.size() - suffix.size());
      // Undouble a trailing consonant (running -> run) except l, s, z.
      std::size_t n = s.size();
      if (n >= 2 && s[n - 1] == s[n - 2] && !is_vowel(s[n - 1]) && s[n - 1] != 'l' &&
          s[n - 1] != 's' && s[n - 1] != 'z') {
        s.resize(n - 1);
      }
      return true;
    }
    return false;
  };
  if (!strip_ending("ing")) strip_ending("ed");

  if (s.size() > 4 && ends_with(s, "ly")) s.resize(s.size() - 2);
  return s;
}

TokenizedDoc TokenizedDoc::from_tokens(std::string source_id, std::vector<std::string> tokens) {
  TokenizedDoc doc;
  doc.source_id = std::move(source_id);
  doc.tokens = std::move(tokens);
  for (const std::string& token : doc.tokens) ++doc.term_counts[token];
  return doc;
}

TokenizedDoc preprocess_doc(std::string source_id, std::string_view text, TextMode mode,
                            const StopwordSet& stopwords, const PreprocessOptions& options) {
  std::vector<std::string> tokens = remove_stopwords(normalize_and_tokenize(text, mode), stopwords);
  if (options.stemmer == StemmerKind::porter_like) {
    for (std::string& token : tokens) token = stem_porter_like(token);
  }
  return TokenizedDoc::from_tokens(std::move(source_id), std::move(tokens));
}

Vocabulary Vocabulary::build(std::span<const TokenizedDoc> docs) {
  std::set<std::string> all_terms;
  for (const TokenizedDoc& doc : docs) {
    for (const auto& [term, count] : doc.term_counts) all_terms.insert(term);
  }
  Vocabulary vocab;
  vocab.terms_.assign(all_terms.begin(), all_terms.end());
  for (int i = 0; i < static_cast<int>(vocab.terms_.size()); ++i) {
    vocab.index_[vocab.terms_[static_cast<std::size_t>(i)]] = i;
  }
  return vocab;
}

int Vocabulary::index_of(const std::string& term) const {
  auto it = index_.find(term);
  return it == index_.end() ? -1 : it->second;
}

}  // namespace newsrank
