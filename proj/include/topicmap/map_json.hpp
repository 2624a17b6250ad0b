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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "topicmap/error.hpp"
#include "topicmap/mapbuilder.hpp"

namespace topicmap {

namespace detail {

inline void append_fixed6(std::string& out, double x) {
  char buf[64];
  const int len = std::snprintf(buf, sizeof buf, "%.6f", x);
  out.append(buf, static_cast<std::size_t>(len));
}

inline void append_string(std::string& out, const std::string& s) { out += nlohmann::json(s).dump(); }

/// Node display order: descending frequency, then term.
inline std::vector<std::size_t> export_node_order(const TermGraph& g) {
  std::vector<std::size_t> order(g.nodes().size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = g.nodes()[a];
    const auto& y = g.nodes()[b];
    return x.freq != y.freq ? x.freq > y.freq : x.term < y.term;
  });
  return order;
}

}  // namespace detail

/// Serializes to the compact export schema. Key order, sort order and the
/// six-decimal real format are fixed so equal maps give equal bytes.
inline std::string to_json(const TopicMap& map) {
  using detail::append_fixed6;
  using detail::append_string;
  const auto& g = map.graph;
  std::string out;
  out.reserve(128 + g.nodes().size() * 48 + g.links().size() * 96);

  out += "{\"meta\":{\"vectorSize\":" + std::to_string(map.train_params.vector_size);
  out += ",\"contextSize\":" + std::to_string(map.train_params.context);
  out += ",\"epochs\":" + std::to_string(map.train_params.epochs);
  out += ",\"terms\":" + std::to_string(map.map_params.terms);
  out += ",\"percentile\":";
  append_fixed6(out, map.map_params.percentile);
  out += ",\"cap\":" + std::to_string(map.map_params.cap);
  out += ",\"basePercentile\":";
  append_fixed6(out, map.map_params.base_percentile);
  out += ",\"seed\":" + std::to_string(map.train_params.seed);
  out += ",\"corpus\":{\"documents\":" + std::to_string(map.corpus.documents);
  out += ",\"tokens\":" + std::to_string(map.corpus.tokens);
  out += ",\"vocab\":" + std::to_string(map.corpus.vocab) + "}}";

  out += ",\"nodes\":[";
  bool first = true;
  for (auto i : detail::export_node_order(g)) {
    if (!first) out.push_back(',');
    first = false;
    out += "{\"id\":";
    append_string(out, g.nodes()[i].term);
    out += ",\"freq\":" + std::to_string(g.nodes()[i].freq);
    out += ",\"community\":";
    if (map.communities) {
      out += std::to_string(map.communities->at(i));
    } else {
      out += "null";
    }
    out.push_back('}');
  }
  out += "],\"links\":[";

  TermGraph sorted = g;
  sorted.sort_links();
  first = true;
  for (const auto& l : sorted.links()) {
    if (!l.weight) throw Error(ErrorCode::InvalidParams, "cannot export a graph without normalized weights");
    if (!first) out.push_back(',');
    first = false;
    out += "{\"source\":";
    append_string(out, g.term(l.source));
    out += ",\"target\":";
    append_string(out, g.term(l.target));
    out += ",\"raw\":";
    append_fixed6(out, l.raw);
    out += ",\"weight\":";
    append_fixed6(out, *l.weight);
    out += l.primary ? ",\"primary\":true}" : ",\"primary\":false}";
  }
  out += "]}";
  return out;
}

inline TopicMap parse_topic_map(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedMap, e.what());
  }
  try {
    TopicMap map;
    const auto& meta = doc.at("meta");
    map.train_params.vector_size = meta.at("vectorSize").get<int>();
    map.train_params.context = meta.at("contextSize").get<int>();
    map.train_params.epochs = meta.at("epochs").get<int>();
    map.train_params.seed = meta.at("seed").get<std::uint64_t>();
    map.map_params.terms = meta.at("terms").get<std::size_t>();
    map.map_params.percentile = meta.at("percentile").get<double>();
    map.map_params.cap = meta.at("cap").get<std::size_t>();
    map.map_params.base_percentile = meta.at("basePercentile").get<double>();
    const auto& corpus = meta.at("corpus");
    map.corpus.documents = corpus.at("documents").get<std::uint64_t>();
    map.corpus.tokens = corpus.at("tokens").get<std::uint64_t>();
    map.corpus.vocab = corpus.at("vocab").get<std::uint64_t>();

    std::vector<int> communities;
    bool any_community = false;
    for (const auto& node : doc.at("nodes")) {
      map.graph.add_node(node.at("id").get<std::string>(), node.at("freq").get<std::uint64_t>());
      const auto& c = node.at("community");
      if (c.is_null()) {
        communities.push_back(-1);
      } else {
        communities.push_back(c.get<int>());
        any_community = true;
      }
    }
    if (any_community) {
      if (std::find(communities.begin(), communities.end(), -1) != communities.end()) {
        throw Error(ErrorCode::MalformedMap, "community ids must be all set or all null");
      }
      map.communities = std::move(communities);
    }
    for (const auto& link : doc.at("links")) {
      map.graph.add_link(link.at("source").get<std::string>(), link.at("target").get<std::string>(),
                         link.at("raw").get<double>());
      auto& added = map.graph.links().back();
      added.weight = link.at("weight").get<double>();
      added.primary = link.at("primary").get<bool>();
    }
    map.graph.sort_links();
    return map;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedMap, e.what());
  } catch (const UnknownTermError& e) {
    throw Error(ErrorCode::MalformedMap, std::string("link endpoint is not a node: ") + e.term());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace topicmap
