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
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "topicmap/embedding.hpp"
#include "topicmap/error.hpp"

namespace topicmap {

struct MapParams {
  std::size_t terms = 500;       ///< N
  double percentile = 0.985;     ///< P
  std::size_t cap = 12;          ///< L
  double base_percentile = 0.95; ///< export layer, <= P

  void validate() const {
    if (terms < 2) throw Error(ErrorCode::InvalidParams, "terms must be >= 2");
    if (cap < 1) throw Error(ErrorCode::InvalidParams, "cap must be >= 1");
    if (!(percentile > 0 && percentile < 1)) throw Error(ErrorCode::InvalidParams, "percentile must be in (0,1)");
    if (!(base_percentile > 0 && base_percentile <= percentile)) {
      throw Error(ErrorCode::InvalidParams, "base percentile must be in (0, percentile]");
    }
  }
};

struct TermNode {
  std::string term;
  std::uint64_t freq = 1;
};

struct TermLink {
  std::size_t source = 0;  ///< node index; the lexicographically smaller term
  std::size_t target = 0;
  double raw = 0;
  std::optional<double> weight;
  bool primary = true;
};

/// Undirected weighted graph over terms. Each link is stored once with its
/// endpoints in lexicographic order.
class TermGraph {
 public:
  std::size_t add_node(std::string term, std::uint64_t freq = 1) {
    auto [it, inserted] = index_.emplace(term, nodes_.size());
    if (!inserted) throw Error(ErrorCode::InvalidParams, "duplicate node '" + term + "'");
    nodes_.push_back({std::move(term), freq});
    return it->second;
  }

  void add_link(std::size_t u, std::size_t v, double raw) {
    if (u == v) throw Error(ErrorCode::InvalidParams, "self-link on '" + nodes_.at(u).term + "'");
    if (nodes_.at(v).term < nodes_.at(u).term) std::swap(u, v);
    links_.push_back({u, v, raw, std::nullopt, true});
  }

  void add_link(std::string_view a, std::string_view b, double raw) { add_link(require(a), require(b), raw); }

  std::optional<std::size_t> find(std::string_view term) const {
    auto it = index_.find(std::string(term));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t require(std::string_view term) const {
    auto idx = find(term);
    if (!idx) throw UnknownTermError(std::string(term));
    return *idx;
  }

  const std::vector<TermNode>& nodes() const noexcept { return nodes_; }
  std::vector<TermNode>& nodes() noexcept { return nodes_; }
  const std::vector<TermLink>& links() const noexcept { return links_; }
  std::vector<TermLink>& links() noexcept { return links_; }

  const std::string& term(std::size_t i) const { return nodes_.at(i).term; }

  /// Sorts links by (source term, target term).
  void sort_links() {
    std::sort(links_.begin(), links_.end(), [this](const TermLink& x, const TermLink& y) {
      const auto& xs = nodes_[x.source].term;
      const auto& ys = nodes_[y.source].term;
      if (xs != ys) return xs < ys;
      return nodes_[x.target].term < nodes_[y.target].term;
    });
  }

  /// Copy with the same nodes and only the links accepted by `keep`.
  template <typename Pred>
  TermGraph filtered(Pred keep) const {
    TermGraph out;
    out.nodes_ = nodes_;
    out.index_ = index_;
    for (const auto& link : links_) {
      if (keep(link)) out.links_.push_back(link);
    }
    return out;
  }

 private:
  std::vector<TermNode> nodes_;
  std::vector<TermLink> links_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Complete graph over `terms` weighted by cosine similarity. Links come out
/// in canonical order so everything downstream is independent of how the
/// pairs were computed.
inline TermGraph build_complete_similarity(const EmbeddingModel& model, const std::vector<std::string>& terms) {
  if (terms.size() < 2) throw Error(ErrorCode::InvalidParams, "need at least two terms");
  std::vector<std::size_t> rows;
  rows.reserve(terms.size());
  TermGraph graph;
  for (const auto& t : terms) {
    rows.push_back(model.index_of(t));
    graph.add_node(t);
  }
  graph.links().reserve(terms.size() * (terms.size() - 1) / 2);
  for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      graph.add_link(i, j, similarity(model, terms[i], terms[j]));
    }
  }
  graph.sort_links();
  return graph;
}

/// Nearest-rank percentile: the smallest stored value v such that the
/// fraction of values <= v is at least p.
inline double percentile_threshold(std::span<const double> values, double p) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "percentile of an empty set");
  if (!(p >= 0 && p <= 1)) throw Error(ErrorCode::InvalidParams, "percentile fraction must be in [0,1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const auto covers = [&](std::size_t k) { return static_cast<double>(k + 1) / static_cast<double>(n) >= p; };
  // ceil(p*n) - 1 is the answer up to rounding in p*n; fix it up by the definition.
  auto k = static_cast<std::size_t>(std::clamp(std::ceil(p * static_cast<double>(n)) - 1.0, 0.0, static_cast<double>(n - 1)));
  while (k > 0 && covers(k - 1)) --k;
  while (k + 1 < n && !covers(k)) ++k;
  return sorted[k];
}

namespace detail {

inline bool is_complete(const TermGraph& g) {
  const std::size_t n = g.nodes().size();
  if (g.links().size() != n * (n - 1) / 2) return false;
  std::vector<std::size_t> degree(n, 0);
  for (const auto& l : g.links()) {
    ++degree[l.source];
    ++degree[l.target];
  }
  return std::all_of(degree.begin(), degree.end(), [n](std::size_t d) { return d == n - 1; });
}

/// Per node, the cap-th largest raw similarity among its links, or -inf
/// when the node has fewer than `cap` links.
inline std::vector<double> link_caps(const TermGraph& g, std::size_t cap) {
  std::vector<std::vector<double>> incident(g.nodes().size());
  for (const auto& l : g.links()) {
    incident[l.source].push_back(l.raw);
    incident[l.target].push_back(l.raw);
  }
  std::vector<double> caps(incident.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t u = 0; u < incident.size(); ++u) {
    auto& v = incident[u];
    if (v.size() < cap) continue;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(cap - 1), v.end(), std::greater<>{});
    caps[u] = v[cap - 1];
  }
  return caps;
}

}  // namespace detail

/// Keeps link (u,v) iff raw >= max(threshold, cap(u), cap(v)), where the
/// threshold is the p-percentile of all raw similarities and cap(u) is the
/// cap-th largest similarity at u. Caps come from the unpruned graph, so the
/// result does not depend on node or link order.
inline TermGraph prune(const TermGraph& complete, double p, std::size_t cap) {
  const std::size_t n = complete.nodes().size();
  if (n < 2) throw Error(ErrorCode::InvalidParams, "prune needs at least two nodes");
  if (!detail::is_complete(complete)) throw Error(ErrorCode::InvalidParams, "prune expects a complete graph");
  if (cap < 1 || cap > n - 1) throw Error(ErrorCode::InvalidParams, "cap must be in [1, N-1]");
  if (!(p >= 0 && p <= 1)) throw Error(ErrorCode::InvalidParams, "percentile fraction must be in [0,1]");

  std::vector<double> raws;
  raws.reserve(complete.links().size());
  for (const auto& l : complete.links()) raws.push_back(l.raw);
  const double threshold = percentile_threshold(raws, p);
  const auto caps = detail::link_caps(complete, cap);

  auto out = complete.filtered([&](const TermLink& l) {
    return l.raw >= std::max({threshold, caps[l.source], caps[l.target]});
  });
  out.sort_links();
  return out;
}

/// Min-max rescales raw similarity into weight in [0,1]. A degenerate range
/// gives every link weight 1.
inline TermGraph normalize(const TermGraph& pruned) {
  if (pruned.links().empty()) throw Error(ErrorCode::EmptyGraph, "no links to normalize");
  auto [lo, hi] = std::minmax_element(pruned.links().begin(), pruned.links().end(),
                                      [](const TermLink& a, const TermLink& b) { return a.raw < b.raw; });
  const double min_raw = lo->raw;
  const double range = hi->raw - min_raw;
  TermGraph out = pruned;
  for (auto& l : out.links()) l.weight = range > 0 ? (l.raw - min_raw) / range : 1.0;
  return out;
}

struct CorpusMeta {
  std::uint64_t documents = 0;
  std::uint64_t tokens = 0;
  std::uint64_t vocab = 0;
};

/// The exported artifact: the normalized base layer with primary flags,
/// node frequencies and optional community ids (indexed like graph nodes).
struct TopicMap {
  TermGraph graph;
  MapParams map_params;
  TrainParams train_params;
  std::optional<std::vector<int>> communities;
  CorpusMeta corpus;
};

}  // namespace topicmap
