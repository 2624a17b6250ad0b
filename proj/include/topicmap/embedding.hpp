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
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "topicmap/corpus.hpp"
#include "topicmap/error.hpp"

namespace topicmap {

struct TrainParams {
  int vector_size = 250;
  int context = 12;
  int epochs = 5;
  int negatives = 5;
  double subsample = 1e-4;  ///< 0 disables frequent-word subsampling
  double learning_rate = 0.025;
  std::uint64_t min_count = 5;
  std::uint64_t seed = 1;
  int workers = 1;

  void validate() const {
    if (vector_size < 1) throw Error(ErrorCode::InvalidParams, "vector size must be >= 1");
    if (context < 1) throw Error(ErrorCode::InvalidParams, "context size must be >= 1");
    if (epochs < 1) throw Error(ErrorCode::InvalidParams, "epochs must be >= 1");
    if (negatives < 0) throw Error(ErrorCode::InvalidParams, "negatives must be >= 0");
    if (!(learning_rate > 0)) throw Error(ErrorCode::InvalidParams, "learning rate must be > 0");
    if (subsample < 0) throw Error(ErrorCode::InvalidParams, "subsample must be >= 0");
    if (min_count < 1) throw Error(ErrorCode::InvalidParams, "min_count must be >= 1");
    if (workers < 1) throw Error(ErrorCode::InvalidParams, "workers must be >= 1");
  }
};

/// Dense word vectors indexed by term. Rows are stored contiguously in
/// vocabulary order (descending count, then term).
class EmbeddingModel {
 public:
  EmbeddingModel() = default;

  EmbeddingModel(std::vector<std::string> terms, std::vector<std::uint64_t> counts, std::size_t dim,
                 std::vector<float> data, TrainParams params = {})
      : terms_(std::move(terms)), counts_(std::move(counts)), dim_(dim), data_(std::move(data)), params_(params) {
    if (dim_ == 0) throw Error(ErrorCode::InvalidParams, "vector dimension must be >= 1");
    if (counts_.empty()) counts_.assign(terms_.size(), 0);
    if (counts_.size() != terms_.size() || data_.size() != terms_.size() * dim_) {
      throw Error(ErrorCode::InvalidParams, "model arrays disagree in size");
    }
    norms_.resize(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (!index_.emplace(terms_[i], i).second) {
        throw Error(ErrorCode::InvalidParams, "duplicate term '" + terms_[i] + "'");
      }
      double sq = 0;
      for (float x : row(i)) {
        if (!std::isfinite(x)) throw Error(ErrorCode::InvalidParams, "non-finite vector for '" + terms_[i] + "'");
        sq += static_cast<double>(x) * x;
      }
      norms_[i] = std::sqrt(sq);
    }
  }

  std::size_t size() const noexcept { return terms_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  const TrainParams& params() const noexcept { return params_; }

  bool contains(std::string_view term) const { return index_.contains(std::string(term)); }

  std::optional<std::size_t> find(std::string_view term) const {
    auto it = index_.find(std::string(term));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index_of(std::string_view term) const {
    auto idx = find(term);
    if (!idx) throw UnknownTermError(std::string(term));
    return *idx;
  }

  std::span<const float> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<const float> row_of(std::string_view term) const { return row(index_of(term)); }
  double norm(std::size_t i) const { return norms_[i]; }

 private:
  std::vector<std::string> terms_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t dim_ = 0;
  std::vector<float> data_;
  std::vector<double> norms_;
  TrainParams params_;
};

namespace detail {

/// The linear congruential generator of the reference word2vec tool. Cheap,
/// and its output is identical on every platform.
struct Lcg {
  std::uint64_t state;
  std::uint64_t next() noexcept {
    state = state * 25214903917ULL + 11;
    return state;
  }
  /// Uniform in [0, 1) with 16 bits of resolution.
  float unit() noexcept { return static_cast<float>(next() & 0xFFFF) / 65536.0f; }
};

inline constexpr int kExpTableSize = 1000;
inline constexpr float kMaxExp = 6.0f;

struct SigmoidTable {
  std::array<float, kExpTableSize> values{};
  SigmoidTable() {
    for (int i = 0; i < kExpTableSize; ++i) {
      const double e = std::exp((static_cast<double>(i) / kExpTableSize * 2 - 1) * kMaxExp);
      values[static_cast<std::size_t>(i)] = static_cast<float>(e / (e + 1));
    }
  }
  float operator()(float f) const noexcept {
    auto i = static_cast<int>((f + kMaxExp) * (kExpTableSize / kMaxExp / 2));
    return values[static_cast<std::size_t>(std::clamp(i, 0, kExpTableSize - 1))];
  }
};

inline double dot(std::span<const float> a, std::span<const float> b) noexcept {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * b[i];
  return s;
}

inline double dot(std::span<const double> a, std::span<const float> b) noexcept {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Negative-sampling table over unigram counts raised to the 3/4 power.
inline std::vector<std::int32_t> build_unigram_table(const std::vector<std::uint64_t>& counts) {
  const std::size_t size = std::clamp<std::size_t>(counts.size() * 500, 1'000'000, 10'000'000);
  std::vector<std::int32_t> table(size);
  double total = 0;
  for (auto c : counts) total += std::pow(static_cast<double>(c), 0.75);
  std::size_t word = 0;
  double cumulative = std::pow(static_cast<double>(counts[0]), 0.75) / total;
  for (std::size_t a = 0; a < size; ++a) {
    table[a] = static_cast<std::int32_t>(word);
    if (static_cast<double>(a) / static_cast<double>(size) > cumulative && word + 1 < counts.size()) {
      ++word;
      cumulative += std::pow(static_cast<double>(counts[word]), 0.75) / total;
    }
  }
  return table;
}

}  // namespace detail

/// Skip-gram with negative sampling. Returns the input-side vectors.
///
/// Workers take contiguous shards of the document list and update the shared
/// parameter arrays without synchronization; lost updates are accepted.
/// Results are bit-reproducible only with `workers == 1`.
inline EmbeddingModel train(const std::vector<Document>& docs, const TrainParams& params) {
  params.validate();
  const Vocabulary vocab = count_terms(docs, {}, params.min_count);
  if (vocab.entries.empty()) throw Error(ErrorCode::EmptyCorpus, "no term reaches min_count");

  std::vector<std::string> terms = ranked_terms(vocab);
  std::vector<std::uint64_t> counts;
  counts.reserve(terms.size());
  std::unordered_map<std::string, std::int32_t> ids;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    counts.push_back(vocab.entries.at(terms[i]));
    ids.emplace(terms[i], static_cast<std::int32_t>(i));
  }

  std::vector<std::vector<std::int32_t>> sentences;
  sentences.reserve(docs.size());
  std::uint64_t train_words = 0;
  for (const auto& doc : docs) {
    std::vector<std::int32_t> s;
    for (const auto& tok : doc.tokens) {
      if (auto it = ids.find(tok); it != ids.end()) s.push_back(it->second);
    }
    train_words += s.size();
    if (!s.empty()) sentences.push_back(std::move(s));
  }
  if (train_words == 0) throw Error(ErrorCode::EmptyCorpus, "no trainable tokens");

  const std::size_t dim = static_cast<std::size_t>(params.vector_size);
  const std::size_t vocab_size = terms.size();
  std::vector<float> syn0(vocab_size * dim);
  std::vector<float> syn1(vocab_size * dim, 0.0f);
  {
    detail::Lcg rng{params.seed};
    for (auto& x : syn0) x = (rng.unit() - 0.5f) / static_cast<float>(dim);
  }
  const auto table = detail::build_unigram_table(counts);
  const detail::SigmoidTable sigmoid;

  const double total_steps = static_cast<double>(params.epochs) * static_cast<double>(train_words) + 1;
  const double sample_scale = params.subsample * static_cast<double>(train_words);
  std::atomic<std::uint64_t> processed{0};

  // Shard boundaries balanced by token count.
  const auto workers = static_cast<std::size_t>(std::min<std::uint64_t>(params.workers, sentences.size()));
  std::vector<std::size_t> bounds{0};
  {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < sentences.size() && bounds.size() < workers; ++i) {
      acc += sentences[i].size();
      if (acc * workers >= train_words * bounds.size()) bounds.push_back(i + 1);
    }
    while (bounds.size() <= workers) bounds.push_back(sentences.size());
    bounds.back() = sentences.size();
  }

  auto work = [&](std::size_t worker) {
    detail::Lcg rng{params.seed + worker};
    std::vector<float> grad(dim);
    std::vector<std::int32_t> kept;
    std::uint64_t local = 0;
    double alpha = params.learning_rate;
    const int window = params.context;

    for (int epoch = 0; epoch < params.epochs; ++epoch) {
      for (std::size_t si = bounds[worker]; si < bounds[worker + 1]; ++si) {
        const auto& sentence = sentences[si];
        if (local >= 10000) {
          const auto done = processed.fetch_add(local) + local;
          local = 0;
          alpha = params.learning_rate * std::max(1e-4, 1.0 - static_cast<double>(done) / total_steps);
        }
        local += sentence.size();
        kept.clear();
        for (auto w : sentence) {
          if (sample_scale > 0) {
            const double cnt = static_cast<double>(counts[static_cast<std::size_t>(w)]);
            const double keep = (std::sqrt(cnt / sample_scale) + 1) * sample_scale / cnt;
            if (keep < rng.unit()) continue;
          }
          kept.push_back(w);
        }
        const auto len = static_cast<std::ptrdiff_t>(kept.size());
        for (std::ptrdiff_t pos = 0; pos < len; ++pos) {
          const auto center = static_cast<std::size_t>(kept[static_cast<std::size_t>(pos)]);
          const auto radius = static_cast<std::ptrdiff_t>(window - static_cast<int>(rng.next() % static_cast<std::uint64_t>(window)));
          const auto lo = std::max<std::ptrdiff_t>(0, pos - radius);
          const auto hi = std::min<std::ptrdiff_t>(len - 1, pos + radius);
          for (auto c = lo; c <= hi; ++c) {
            if (c == pos) continue;
            float* in = syn0.data() + static_cast<std::size_t>(kept[static_cast<std::size_t>(c)]) * dim;
            std::fill(grad.begin(), grad.end(), 0.0f);
            for (int d = 0; d <= params.negatives; ++d) {
              std::size_t target;
              float label;
              if (d == 0) {
                target = center;
                label = 1;
              } else {
                target = static_cast<std::size_t>(table[(rng.next() >> 16) % table.size()]);
                if (target == center) continue;
                label = 0;
              }
              float* out = syn1.data() + target * dim;
              float f = 0;
              for (std::size_t k = 0; k < dim; ++k) f += in[k] * out[k];
              float g;
              if (f > detail::kMaxExp) {
                g = (label - 1) * static_cast<float>(alpha);
              } else if (f < -detail::kMaxExp) {
                g = label * static_cast<float>(alpha);
              } else {
                g = (label - sigmoid(f)) * static_cast<float>(alpha);
              }
              for (std::size_t k = 0; k < dim; ++k) grad[k] += g * out[k];
              for (std::size_t k = 0; k < dim; ++k) out[k] += g * in[k];
            }
            for (std::size_t k = 0; k < dim; ++k) in[k] += grad[k];
          }
        }
      }
    }
    processed.fetch_add(local);
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  return EmbeddingModel(std::move(terms), std::move(counts), dim, std::move(syn0), params);
}

/// Cosine similarity of two vocabulary terms.
inline double similarity(const EmbeddingModel& model, std::string_view t1, std::string_view t2) {
  const auto i = model.index_of(t1);
  const auto j = model.index_of(t2);
  const double denom = model.norm(i) * model.norm(j);
  if (denom == 0) return 0;
  return detail::dot(model.row(i), model.row(j)) / denom;
}

struct Neighbor {
  std::string term;
  double similarity = 0;

  bool operator==(const Neighbor&) const = default;
};

/// Top-k vocabulary terms by cosine to `query`, descending, ties by term.
inline std::vector<Neighbor> nearest(const EmbeddingModel& model, std::span<const double> query, std::size_t k,
                                     const std::unordered_set<std::string>& exclude = {}) {
  if (k < 1) throw Error(ErrorCode::InvalidParams, "k must be >= 1");
  if (query.size() != model.dim()) throw Error(ErrorCode::InvalidParams, "query dimension mismatch");
  double qn = 0;
  for (double x : query) qn += x * x;
  qn = std::sqrt(qn);
  if (qn < 1e-12) throw Error(ErrorCode::ZeroVector, "query vector has zero norm");
  std::vector<double> unit(query.begin(), query.end());
  for (auto& x : unit) x /= qn;

  std::vector<Neighbor> all;
  all.reserve(model.size());
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto& term = model.terms()[i];
    if (exclude.contains(term)) continue;
    const double n = model.norm(i);
    all.push_back({term, n == 0 ? 0.0 : detail::dot(std::span<const double>(unit), model.row(i)) / n});
  }
  const auto by_rank = [](const Neighbor& a, const Neighbor& b) {
    return a.similarity != b.similarity ? a.similarity > b.similarity : a.term < b.term;
  };
  const auto keep = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(), by_rank);
  all.resize(keep);
  return all;
}

/// Top-k neighbours of a vocabulary term; the term itself is never returned.
inline std::vector<Neighbor> nearest(const EmbeddingModel& model, std::string_view term, std::size_t k,
                                     const std::unordered_set<std::string>& exclude = {}) {
  const auto row = model.row_of(term);
  std::vector<double> query(row.begin(), row.end());
  auto skip = exclude;
  skip.emplace(term);
  return nearest(model, std::span<const double>(query), k, skip);
}

/// Mean of the unit-normalized member vectors, renormalized to unit length.
inline std::vector<double> compound(const EmbeddingModel& model, const std::vector<std::string>& terms) {
  if (terms.empty()) throw Error(ErrorCode::InvalidParams, "compound needs at least one term");
  std::vector<double> mean(model.dim(), 0.0);
  for (const auto& t : terms) {
    const auto i = model.index_of(t);
    const double n = model.norm(i);
    if (n == 0) continue;
    const auto row = model.row(i);
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += row[k] / n;
  }
  double sq = 0;
  for (auto& x : mean) {
    x /= static_cast<double>(terms.size());
    sq += x * x;
  }
  const double norm = std::sqrt(sq);
  if (norm < 1e-12) throw Error(ErrorCode::ZeroVector, "compound vector cancels out");
  for (auto& x : mean) x /= norm;
  return mean;
}

/// Scales a reference vector size to another vocabulary by keeping
/// V^2 / |vocab| constant. Never returns less than 10.
inline int suggest_vector_size(int ref_v, std::uint64_t ref_vocab, std::uint64_t vocab) {
  if (ref_v < 1 || ref_vocab < 1 || vocab < 1) throw Error(ErrorCode::InvalidParams, "inputs must be >= 1");
  const double v = ref_v * std::sqrt(static_cast<double>(vocab) / static_cast<double>(ref_vocab));
  return std::max(10, static_cast<int>(std::lround(v)));
}

// Text model format: "<count> <dim>" header, then "<term> <x1> ... <xdim>"
// per line, floats printed with 9 significant digits.

inline void save_model(const EmbeddingModel& model, std::ostream& out) {
  out << model.size() << ' ' << model.dim() << '\n';
  std::array<char, 32> buf{};
  std::string line;
  for (std::size_t i = 0; i < model.size(); ++i) {
    line = model.terms()[i];
    for (float x : model.row(i)) {
      auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 9);
      line.push_back(' ');
      line.append(buf.data(), res.ptr);
    }
    line.push_back('\n');
    out << line;
  }
}

inline void save_model(const EmbeddingModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write model " + path.string());
  save_model(model, out);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

inline EmbeddingModel load_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Io, "model file is empty");
  std::size_t count = 0;
  std::size_t dim = 0;
  {
    const char* p = line.data();
    const char* end = p + line.size();
    auto r1 = std::from_chars(p, end, count);
    while (r1.ptr < end && *r1.ptr == ' ') ++r1.ptr;
    auto r2 = std::from_chars(r1.ptr, end, dim);
    if (r1.ec != std::errc{} || r2.ec != std::errc{} || dim == 0) {
      throw Error(ErrorCode::Io, "bad model header '" + line + "'");
    }
  }
  std::vector<std::string> terms;
  std::vector<float> data;
  terms.reserve(count);
  data.reserve(count * dim);
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw Error(ErrorCode::Io, "model file truncated at row " + std::to_string(i));
    const auto space = line.find(' ');
    if (space == std::string::npos || space == 0) throw Error(ErrorCode::Io, "bad model row " + std::to_string(i));
    terms.push_back(line.substr(0, space));
    const char* p = line.data() + space;
    const char* end = line.data() + line.size();
    for (std::size_t k = 0; k < dim; ++k) {
      while (p < end && *p == ' ') ++p;
      float x = 0;
      auto r = std::from_chars(p, end, x);
      if (r.ec != std::errc{}) throw Error(ErrorCode::Io, "bad number in model row " + std::to_string(i));
      data.push_back(x);
      p = r.ptr;
    }
  }
  TrainParams params;
  params.vector_size = static_cast<int>(dim);
  return EmbeddingModel(std::move(terms), {}, dim, std::move(data), params);
}

inline EmbeddingModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open model " + path.string());
  return load_model(in);
}

}  // namespace topicmap
