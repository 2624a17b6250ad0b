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
#include <map>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

#include "topicmap/error.hpp"
#include "topicmap/mapbuilder.hpp"

namespace topicmap {

struct Membership {
  int community = 0;
  double strength = 0;  ///< share of the node's incident weight, in (0,1]

  bool operator==(const Membership&) const = default;
};

/// Per-node community ids (contiguous from 0, indexed like graph nodes) and
/// soft memberships, strongest first.
struct CommunityAssignment {
  std::vector<int> primary;
  std::vector<std::vector<Membership>> memberships;
  int count = 0;
  int iterations = 0;
  bool converged = false;
};

struct CommunityParams {
  std::uint64_t seed = 1;
  int max_iters = 100;
  double membership_threshold = 0.3;
};

/// Weighted label propagation. Nodes are visited in a fresh seeded shuffle
/// each sweep and adopt the neighbouring label with the largest total link
/// weight (smallest id on ties); updates are applied in place. Link weight
/// is the normalized weight when set, the raw similarity otherwise.
inline CommunityAssignment detect_communities(const TermGraph& graph, const CommunityParams& params = {}) {
  const std::size_t n = graph.nodes().size();
  if (n == 0) throw Error(ErrorCode::InvalidParams, "community detection on an empty graph");
  if (params.max_iters < 1) throw Error(ErrorCode::InvalidParams, "max_iters must be >= 1");

  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  for (const auto& l : graph.links()) {
    const double w = l.weight.value_or(l.raw);
    adj[l.source].emplace_back(l.target, w);
    adj[l.target].emplace_back(l.source, w);
  }

  std::vector<std::size_t> label(n);
  for (std::size_t i = 0; i < n; ++i) label[i] = i;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  std::mt19937_64 rng(params.seed);
  CommunityAssignment out;
  std::map<std::size_t, double> votes;
  for (int iter = 0; iter < params.max_iters; ++iter) {
    // Fisher-Yates with an explicit draw so the order is identical across
    // standard library implementations.
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    bool changed = false;
    for (auto u : order) {
      if (adj[u].empty()) continue;
      votes.clear();
      for (const auto& [v, w] : adj[u]) votes[label[v]] += w;
      auto best = votes.begin();
      for (auto it = votes.begin(); it != votes.end(); ++it) {
        if (it->second > best->second) best = it;
      }
      if (best->first != label[u]) {
        label[u] = best->first;
        changed = true;
      }
    }
    out.iterations = iter + 1;
    if (!changed) {
      out.converged = true;
      break;
    }
  }

  std::unordered_map<std::size_t, int> dense;
  out.primary.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = dense.emplace(label[i], static_cast<int>(dense.size()));
    out.primary[i] = it->second;
  }
  out.count = static_cast<int>(dense.size());

  out.memberships.resize(n);
  for (std::size_t u = 0; u < n; ++u) {
    std::map<int, double> share;
    double total = 0;
    for (const auto& [v, w] : adj[u]) {
      share[out.primary[v]] += w;
      total += w;
    }
    auto& m = out.memberships[u];
    if (total > 0) {
      for (const auto& [community, w] : share) {
        const double strength = w / total;
        if (strength >= params.membership_threshold || community == out.primary[u]) {
          if (strength > 0) m.push_back({community, strength});
        }
      }
    }
    if (std::none_of(m.begin(), m.end(), [&](const Membership& x) { return x.community == out.primary[u]; })) {
      m.push_back({out.primary[u], 1.0});
    }
    std::sort(m.begin(), m.end(), [](const Membership& a, const Membership& b) {
      return a.strength != b.strength ? a.strength > b.strength : a.community < b.community;
    });
  }
  return out;
}

}  // namespace topicmap
