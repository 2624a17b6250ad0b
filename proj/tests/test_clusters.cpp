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

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "topicmap/clusters.hpp"

using namespace topicmap;

namespace {

void add_clique(TermGraph& g, const std::string& prefix, int size, double w) {
  for (int i = 0; i < size; ++i) g.add_node(prefix + std::to_string(i));
  for (int i = 0; i < size; ++i) {
    for (int j = i + 1; j < size; ++j) {
      g.add_link(prefix + std::to_string(i), prefix + std::to_string(j), w);
      g.links().back().weight = w;
    }
  }
}

/// Partition as a set of member sets, so community ids do not matter.
std::set<std::set<std::string>> partition(const TermGraph& g, const CommunityAssignment& c) {
  std::map<int, std::set<std::string>> groups;
  for (std::size_t i = 0; i < c.primary.size(); ++i) groups[c.primary[i]].insert(g.term(i));
  std::set<std::set<std::string>> out;
  for (auto& [id, members] : groups) out.insert(members);
  return out;
}

}  // namespace

TEST(Communities, DisconnectedCliques) {
  TermGraph g;
  add_clique(g, "p", 4, 1.0);
  add_clique(g, "q", 4, 1.0);
  const auto c = detect_communities(g, {3});
  EXPECT_EQ(c.count, 2);
  EXPECT_EQ(partition(g, c), (std::set<std::set<std::string>>{{"p0", "p1", "p2", "p3"}, {"q0", "q1", "q2", "q3"}}));
  EXPECT_TRUE(c.converged);
}

TEST(Communities, WeakBridgeGivesPrimaryOnlyMemberships) {
  TermGraph g;
  add_clique(g, "p", 5, 1.0);
  add_clique(g, "q", 5, 1.0);
  g.add_link("p0", "q0", 0.1);
  g.links().back().weight = 0.1;
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const auto c = detect_communities(g, {seed});
    ASSERT_EQ(c.count, 2);
    EXPECT_EQ(partition(g, c).size(), 2u);
    EXPECT_EQ(partition(g, c).begin()->size(), 5u);
    const auto p0 = *g.find("p0");
    ASSERT_EQ(c.memberships[p0].size(), 1u);
    EXPECT_EQ(c.memberships[p0][0].community, c.primary[p0]);
    EXPECT_NEAR(c.memberships[p0][0].strength, 4.0 / 4.1, 1e-12);
  }
}

TEST(Communities, OverlapAboveThresholdIsReported) {
  // hub is tied to two triangles with equal weight: two memberships of 0.5
  TermGraph g;
  add_clique(g, "p", 3, 1.0);
  add_clique(g, "q", 3, 1.0);
  g.add_node("hub");
  for (const char* t : {"p0", "p1", "q0", "q1"}) {
    g.add_link("hub", t, 1.0);
    g.links().back().weight = 1.0;
  }
  const auto c = detect_communities(g, {1});
  const auto hub = *g.find("hub");
  if (c.count == 2) {
    ASSERT_EQ(c.memberships[hub].size(), 2u);
    EXPECT_NEAR(c.memberships[hub][0].strength, 0.5, 1e-12);
    EXPECT_EQ(c.memberships[hub][0].community, c.primary[hub]);
  }
}

TEST(Communities, DeterministicForFixedSeed) {
  std::mt19937_64 rng(4);
  const auto g = oracle::to_graph(oracle::random_complete(30, rng));
  const auto a = detect_communities(g, {11});
  const auto b = detect_communities(g, {11});
  EXPECT_EQ(a.primary, b.primary);
  EXPECT_EQ(a.memberships, b.memberships);
}

TEST(Communities, IsolatedNodesAreSingletons) {
  TermGraph g;
  g.add_node("a");
  g.add_node("b");
  g.add_node("c");
  const auto c = detect_communities(g);
  EXPECT_EQ(c.count, 3);
  EXPECT_EQ(c.memberships[0], (std::vector<Membership>{{c.primary[0], 1.0}}));
  EXPECT_THROW(detect_communities(TermGraph{}), Error);
}

TEST(Communities, InvariantsOnRandomSparseGraphs) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> uni(0.01, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    TermGraph g;
    const int n = 5 + static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) g.add_node("v" + std::to_string(i));
    // two halves that never connect
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if ((i < n / 2) != (j < n / 2) || rng() % 5 != 0) continue;
        g.add_link(static_cast<std::size_t>(i), static_cast<std::size_t>(j), 0);
        g.links().back().weight = uni(rng);
      }
    }
    const auto c = detect_communities(g, {static_cast<std::uint64_t>(trial)});
    std::set<int> ids(c.primary.begin(), c.primary.end());
    ASSERT_EQ(static_cast<int>(ids.size()), c.count);
    ASSERT_EQ(*ids.rbegin(), c.count - 1);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if ((i < n / 2) != (j < n / 2)) {
          ASSERT_NE(c.primary[static_cast<std::size_t>(i)], c.primary[static_cast<std::size_t>(j)]);
        }
      }
    }
    for (std::size_t u = 0; u < c.memberships.size(); ++u) {
      const auto& m = c.memberships[u];
      ASSERT_FALSE(m.empty());
      for (const auto& x : m) {
        ASSERT_GT(x.strength, 0.0);
        ASSERT_LE(x.strength, 1.0 + 1e-12);
      }
      if (c.converged) { ASSERT_EQ(m[0].community, c.primary[u]); }
    }
    // no label invented: at a fixed point a linked node shares its label with a neighbour
    for (std::size_t u = 0; u < c.primary.size(); ++u) {
      bool ok = false;
      bool has_neighbor = false;
      for (const auto& l : g.links()) {
        if (l.source == u || l.target == u) {
          has_neighbor = true;
          const auto v = l.source == u ? l.target : l.source;
          if (c.primary[v] == c.primary[u]) ok = true;
        }
      }
      ASSERT_TRUE(ok || !has_neighbor || !c.converged);
    }
  }
}
