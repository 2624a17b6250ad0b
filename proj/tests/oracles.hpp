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

// Independent reference implementations and synthetic fixtures shared by the
// unit tests and the acceptance suite. Nothing here calls into the code it
// is used to check, except for plain data types.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "topicmap/corpus.hpp"
#include "topicmap/embedding.hpp"
#include "topicmap/mapbuilder.hpp"

namespace oracle {

/// Sort-based nearest-rank percentile: scan distinct values upward and stop
/// at the first whose cumulative share reaches p.
inline double percentile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::size_t le = i + 1;
    while (le < values.size() && values[le] == values[i]) ++le;
    if (static_cast<double>(le) / n >= p) return values[i];
  }
  return values.back();
}

struct Edge {
  std::string a, b;  // a < b
  double raw;
  bool operator<(const Edge& o) const { return std::tie(a, b) < std::tie(o.a, o.b); }
  bool operator==(const Edge& o) const { return a == o.a && b == o.b && raw == o.raw; }
};

/// Survival rule applied literally: threshold from the full list, caps from
/// fully sorted incident lists.
inline std::set<Edge> prune(const std::vector<Edge>& complete, double p, std::size_t cap) {
  std::vector<double> raws;
  std::map<std::string, std::vector<double>> incident;
  for (const auto& e : complete) {
    raws.push_back(e.raw);
    incident[e.a].push_back(e.raw);
    incident[e.b].push_back(e.raw);
  }
  const double threshold = percentile(raws, p);
  std::map<std::string, double> caps;
  for (auto& [term, list] : incident) {
    std::sort(list.rbegin(), list.rend());
    caps[term] = list.size() >= cap ? list[cap - 1] : -INFINITY;
  }
  std::set<Edge> out;
  for (const auto& e : complete) {
    if (e.raw >= threshold && e.raw >= caps[e.a] && e.raw >= caps[e.b]) out.insert(e);
  }
  return out;
}

inline std::vector<Edge> edges_of(const topicmap::TermGraph& g) {
  std::vector<Edge> out;
  for (const auto& l : g.links()) {
    auto a = g.term(l.source);
    auto b = g.term(l.target);
    if (b < a) std::swap(a, b);
    out.push_back({a, b, l.raw});
  }
  return out;
}

inline std::set<Edge> edge_set(const topicmap::TermGraph& g) {
  auto v = edges_of(g);
  return {v.begin(), v.end()};
}

/// Complete graph on n nodes named n00, n01, ... with uniform random raws.
inline std::vector<Edge> random_complete(std::size_t n, std::mt19937_64& rng, bool with_ties = false) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_int_distribution<int> coarse(-4, 4);
  std::vector<Edge> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      char a[8], b[8];
      std::snprintf(a, sizeof a, "n%03zu", i);
      std::snprintf(b, sizeof b, "n%03zu", j);
      out.push_back({a, b, with_ties ? coarse(rng) / 4.0 : uni(rng)});
    }
  }
  return out;
}

inline topicmap::TermGraph to_graph(const std::vector<Edge>& edges) {
  topicmap::TermGraph g;
  for (const auto& e : edges) {
    if (!g.find(e.a)) g.add_node(e.a);
    if (!g.find(e.b)) g.add_node(e.b);
    g.add_link(e.a, e.b, e.raw);
  }
  return g;
}

/// Exhaustive cosine ranking, computed from raw rows without the library.
inline std::vector<std::pair<std::string, double>> scan(const topicmap::EmbeddingModel& m,
                                                        const std::vector<double>& query,
                                                        const std::set<std::string>& exclude) {
  double qn = 0;
  for (double x : query) qn += x * x;
  qn = std::sqrt(qn);
  std::vector<std::pair<std::string, double>> all;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (exclude.count(m.terms()[i])) continue;
    double dot = 0, vn = 0;
    for (std::size_t k = 0; k < m.dim(); ++k) {
      dot += (query[k] / qn) * m.row(i)[k];
      vn += static_cast<double>(m.row(i)[k]) * m.row(i)[k];
    }
    all.emplace_back(m.terms()[i], dot / std::sqrt(vn));
  }
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
    return x.second != y.second ? x.second > y.second : x.first < y.first;
  });
  return all;
}

inline std::vector<double> row_vector(const topicmap::EmbeddingModel& m, const std::string& t) {
  const auto r = m.row_of(t);
  return {r.begin(), r.end()};
}

/// Random Gaussian embedding over terms w0000..w(n-1).
inline topicmap::EmbeddingModel random_model(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> gauss;
  std::vector<std::string> terms;
  std::vector<float> data;
  for (std::size_t i = 0; i < n; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "w%04zu", i);
    terms.emplace_back(name);
    for (std::size_t k = 0; k < dim; ++k) data.push_back(gauss(rng));
  }
  return topicmap::EmbeddingModel(std::move(terms), {}, dim, std::move(data));
}

/// Two disjoint topics: documents draw words uniformly from one topic's
/// ten terms (a1..a10 or b1..b10).
inline std::vector<topicmap::Document> two_topic_corpus(std::size_t docs = 1000, std::size_t length = 20,
                                                        std::uint64_t seed = 42) {
  std::mt19937_64 rng(seed);
  std::vector<topicmap::Document> out;
  for (std::size_t d = 0; d < docs; ++d) {
    const char topic = (d % 2 == 0) ? 'a' : 'b';
    topicmap::Document doc{"doc" + std::to_string(d), {}};
    for (std::size_t i = 0; i < length; ++i) {
      doc.tokens.push_back(std::string(1, topic) + std::to_string(1 + rng() % 10));
    }
    out.push_back(std::move(doc));
  }
  return out;
}

inline char topic_of(const std::string& term) { return term.at(0); }

struct ExactAnalogy {
  topicmap::EmbeddingModel model;
  std::vector<std::string> question_lines;  // "x_i y_i x_j y_j"
};

/// Pairs (x_i, y_i) on the unit sphere with y_i - x_i the same offset for all
/// i, so y_i - x_i + x_j == y_j exactly and every vector has unit norm.
inline ExactAnalogy exact_analogy(std::size_t pairs = 50, std::size_t dim = 17, std::uint64_t seed = 5) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const double h = 0.5;
  const double r = std::sqrt(1 - h * h);
  std::vector<std::string> terms;
  std::vector<float> data;
  for (std::size_t i = 0; i < pairs; ++i) {
    std::vector<double> u(dim - 1);
    double norm = 0;
    for (auto& x : u) {
      x = gauss(rng);
      norm += x * x;
    }
    norm = std::sqrt(norm);
    for (int side = 0; side < 2; ++side) {
      terms.push_back((side == 0 ? "x" : "y") + std::to_string(i));
      for (double x : u) data.push_back(static_cast<float>(r * x / norm));
      data.push_back(static_cast<float>(side == 0 ? h : -h));
    }
  }
  ExactAnalogy out{topicmap::EmbeddingModel(terms, {}, dim, data), {}};
  for (std::size_t i = 0; i < pairs; ++i) {
    for (std::size_t j = 0; j < pairs; ++j) {
      if (i == j) continue;
      out.question_lines.push_back("x" + std::to_string(i) + " y" + std::to_string(i) + " x" + std::to_string(j) +
                                   " y" + std::to_string(j));
    }
  }
  return out;
}

/// Same vectors, assigned to terms by a random permutation.
inline topicmap::EmbeddingModel permuted(const topicmap::EmbeddingModel& m, std::uint64_t seed) {
  std::vector<std::size_t> perm(m.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<float> data;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto row = m.row(perm[i]);
    data.insert(data.end(), row.begin(), row.end());
  }
  return topicmap::EmbeddingModel(m.terms(), {}, m.dim(), data);
}

}  // namespace oracle
