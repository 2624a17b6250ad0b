// Copyright 2026 The topicmap Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "topicmap/error.hpp"

namespace topicmap {

struct Document {
  std::string id;
  std::vector<std::string> tokens;
};

/// Term frequencies after filtering. `total_tokens` always counts every token
/// seen, including the ones filtered out of `entries`.
struct Vocabulary {
  std::unordered_map<std::string, std::uint64_t> entries;
  std::uint64_t total_tokens = 0;
  std::uint64_t total_documents = 0;

  std::size_t size() const noexcept { return entries.size(); }
  bool contains(std::string_view term) const { return entries.contains(std::string(term)); }
  std::uint64_t count(std::string_view term) const {
    auto it = entries.find(std::string(term));
    return it == entries.end() ? 0 : it->second;
  }
};

namespace detail {

// Bytes >= 0x80 are treated as word characters so multibyte UTF-8 letters
// stay inside their token.
inline bool is_word_byte(unsigned char c) noexcept {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

inline bool is_joiner(unsigned char c) noexcept { return c == '.' || c == '-'; }

inline char ascii_lower(char c) noexcept {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string pair_key(std::string_view a, std::string_view b) {
  std::string key;
  key.reserve(a.size() + b.size() + 1);
  key.append(a).push_back(' ');
  key.append(b);
  return key;
}

}  // namespace detail

/// Splits text into lowercase terms. Letters and digits form terms; '.' and
/// '-' survive only between word characters ("U.S." -> "u.s",
/// "forward-looking" stays whole). Everything else separates terms.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && !detail::is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
    if (i == n) break;
    std::size_t start = i;
    std::size_t last_word = i;
    while (i < n) {
      auto c = static_cast<unsigned char>(text[i]);
      if (detail::is_word_byte(c)) {
        last_word = i;
      } else if (!detail::is_joiner(c)) {
        break;
      }
      ++i;
    }
    std::string token(text.substr(start, last_word - start + 1));
    for (auto& c : token) c = detail::ascii_lower(c);
    out.push_back(std::move(token));
    // Resume right after the last word byte so trailing joiners are dropped.
    i = last_word + 1;
  }
  return out;
}

/// Normalizes a single user-supplied term the same way the tokenizer would.
/// Multi-token input is joined with '_' so phrase terms can be looked up.
inline std::string normalize_term(std::string_view raw) {
  auto parts = tokenize(raw);
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back('_');
    out += parts[i];
  }
  return out;
}

struct PhraseParams {
  double discount = 5.0;
  double threshold = 100.0;
};

/// Adjacent pairs whose discounted co-occurrence score clears the threshold.
class PhraseTable {
 public:
  PhraseTable() = default;

  bool contains(std::string_view a, std::string_view b) const {
    return pairs_.contains(detail::pair_key(a, b));
  }
  void insert(std::string_view a, std::string_view b) { pairs_.insert(detail::pair_key(a, b)); }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }

 private:
  std::unordered_set<std::string> pairs_;
};

/// score(a,b) = (count(ab) - discount) / (count(a) * count(b)) * total_tokens
inline PhraseTable learn_phrases(const std::vector<Document>& docs, const PhraseParams& params = {}) {
  if (params.discount < 0) throw Error(ErrorCode::InvalidParams, "phrase discount must be >= 0");
  std::unordered_map<std::string, std::uint64_t> unigrams;
  std::unordered_map<std::string, std::uint64_t> bigrams;
  std::uint64_t total = 0;
  for (const auto& doc : docs) {
    total += doc.tokens.size();
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
      ++unigrams[doc.tokens[i]];
      if (i + 1 < doc.tokens.size()) ++bigrams[detail::pair_key(doc.tokens[i], doc.tokens[i + 1])];
    }
  }
  PhraseTable table;
  for (const auto& [key, count] : bigrams) {
    const auto space = key.find(' ');
    const auto a = std::string_view(key).substr(0, space);
    const auto b = std::string_view(key).substr(space + 1);
    const double ca = static_cast<double>(unigrams.at(std::string(a)));
    const double cb = static_cast<double>(unigrams.at(std::string(b)));
    const double score = (static_cast<double>(count) - params.discount) / (ca * cb) * static_cast<double>(total);
    if (score >= params.threshold) table.insert(a, b);
  }
  return table;
}

/// One greedy left-to-right pass; a merged pair consumes both tokens.
inline std::vector<Document> apply_phrases(const PhraseTable& table, const std::vector<Document>& docs) {
  std::vector<Document> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) {
    Document merged{doc.id, {}};
    merged.tokens.reserve(doc.tokens.size());
    const auto& t = doc.tokens;
    for (std::size_t i = 0; i < t.size();) {
      if (i + 1 < t.size() && table.contains(t[i], t[i + 1])) {
        merged.tokens.push_back(t[i] + "_" + t[i + 1]);
        i += 2;
      } else {
        merged.tokens.push_back(t[i]);
        ++i;
      }
    }
    out.push_back(std::move(merged));
  }
  return out;
}

inline std::vector<Document> detect_phrases(const std::vector<Document>& docs, double discount, double score_threshold) {
  return apply_phrases(learn_phrases(docs, {discount, score_threshold}), docs);
}

inline Vocabulary count_terms(const std::vector<Document>& docs,
                              const std::unordered_set<std::string>& stopwords,
                              std::uint64_t min_count) {
  if (min_count < 1) throw Error(ErrorCode::InvalidParams, "min_count must be >= 1");
  Vocabulary vocab;
  vocab.total_documents = docs.size();
  for (const auto& doc : docs) {
    vocab.total_tokens += doc.tokens.size();
    for (const auto& tok : doc.tokens) ++vocab.entries[tok];
  }
  std::erase_if(vocab.entries, [&](const auto& kv) {
    return kv.second < min_count || stopwords.contains(kv.first);
  });
  return vocab;
}

/// Terms ordered by descending count, ties by ascending term.
inline std::vector<std::string> ranked_terms(const Vocabulary& vocab) {
  std::vector<std::pair<std::string, std::uint64_t>> items(vocab.entries.begin(), vocab.entries.end());
  std::sort(items.begin(), items.end(), [](const auto& x, const auto& y) {
    return x.second != y.second ? x.second > y.second : x.first < y.first;
  });
  std::vector<std::string> out;
  out.reserve(items.size());
  for (auto& item : items) out.push_back(std::move(item.first));
  return out;
}

inline std::vector<std::string> top_terms(const Vocabulary& vocab, std::size_t n) {
  if (n < 1) throw Error(ErrorCode::InvalidParams, "N must be >= 1");
  auto ranked = ranked_terms(vocab);
  if (ranked.size() > n) ranked.resize(n);
  return ranked;
}

inline const std::unordered_set<std::string>& default_stopwords() {
  static const std::unordered_set<std::string> words = {
      "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any",
      "are", "as", "at", "be", "because", "been", "before", "being", "below", "between", "both",
      "but", "by", "can", "could", "did", "do", "does", "doing", "down", "during", "each", "even",
      "few", "for", "from", "further", "had", "has", "have", "having", "he", "her", "here", "hers",
      "herself", "him", "himself", "his", "how", "i", "if", "in", "into", "is", "it", "its",
      "itself", "just", "may", "me", "might", "more", "most", "much", "must", "my", "myself", "no",
      "nor", "not", "now", "of", "off", "on", "once", "only", "or", "other", "our", "ours",
      "ourselves", "out", "over", "own", "said", "same", "says", "she", "should", "since", "so",
      "some", "such", "than", "that", "the", "their", "theirs", "them", "themselves", "then",
      "there", "these", "they", "this", "those", "through", "to", "too", "under", "until", "up",
      "upon", "us", "very", "was", "we", "were", "what", "when", "where", "whether", "which",
      "while", "who", "whom", "whose", "why", "will", "with", "within", "without", "would", "yet",
      "you", "your", "yours", "yourself", "yourselves", "s", "t", "mr", "mrs", "ms", "per", "via",
      "one", "two", "new", "say", "get", "got", "let", "made", "make", "many", "well",
  };
  return words;
}

inline std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open stopword file " + path.string());
  std::unordered_set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto term = normalize_term(line);
    if (!term.empty()) out.insert(std::move(term));
  }
  return out;
}

/// A directory is read as one document per `.txt` file (sorted by file name);
/// a regular file is read as one document per non-blank line.
inline std::vector<Document> load_documents(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::vector<Document> docs;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      std::ifstream in(file, std::ios::binary);
      if (!in) throw Error(ErrorCode::Io, "cannot read " + file.string());
      std::ostringstream buf;
      buf << in.rdbuf();
      docs.push_back({file.filename().string(), tokenize(buf.str())});
    }
    return docs;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open corpus " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    docs.push_back({"line:" + std::to_string(lineno), std::move(tokens)});
  }
  return docs;
}

}  // namespace topicmap
