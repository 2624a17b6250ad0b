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
#include <charconv>
#include <cmath>
#include <deque>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "topicmap/corpus.hpp"
#include "topicmap/embedding.hpp"
#include "topicmap/map_json.hpp"
#include "topicmap/mapbuilder.hpp"

namespace topicmap::server {

inline constexpr int kDefaultPort = 8787;

/// Everything a request may read. Built once before the server starts and
/// never modified afterwards, so handlers need no locking.
struct ServeState {
  std::optional<std::string> map_json;  ///< served verbatim
  std::optional<TopicMap> map;
  std::optional<EmbeddingModel> model;
  /// Raw-cosine cut for neighbourhood links: the base-percentile threshold
  /// over the map's terms, recomputed from the model. -inf without a map.
  double link_threshold = -std::numeric_limits<double>::infinity();
  std::filesystem::path static_dir;
};

inline ServeState make_state(std::optional<std::string> map_json, std::optional<EmbeddingModel> model,
                             std::filesystem::path static_dir = {}) {
  ServeState state;
  state.static_dir = std::move(static_dir);
  if (map_json) {
    state.map = parse_topic_map(*map_json);
    state.map_json = std::move(map_json);
  }
  state.model = std::move(model);
  if (state.map && state.model) {
    std::vector<std::string> terms;
    for (const auto& node : state.map->graph.nodes()) {
      if (state.model->contains(node.term)) terms.push_back(node.term);
    }
    if (terms.size() >= 2) {
      std::vector<double> raws;
      for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
        for (std::size_t j = i + 1; j < terms.size(); ++j) raws.push_back(similarity(*state.model, terms[i], terms[j]));
      }
      state.link_threshold = percentile_threshold(raws, state.map->map_params.base_percentile);
    }
  }
  return state;
}

struct Reply {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

namespace detail {

inline Reply error_reply(int status, const std::string& code, nlohmann::json extra = nlohmann::json::object()) {
  extra["error"] = code;
  return {status, extra.dump()};
}

/// Parses an integer query parameter; nullopt on garbage.
inline std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline Reply bad_request(const std::string& message) {
  return error_reply(400, "BadRequest", {{"message", message}});
}

}  // namespace detail

inline Reply handle_map(const ServeState& state) {
  if (!state.map_json) return detail::error_reply(503, "MapNotLoaded");
  return {200, *state.map_json};
}

/// Breadth-first close-up: level 0 is the term, each further level adds the
/// k nearest (by embedding cosine) of every frontier term not already seen.
inline Reply handle_neighbors(const ServeState& state, std::string_view raw_term, std::string_view k_param,
                              std::string_view depth_param) {
  if (!state.model) return detail::error_reply(503, "ModelNotLoaded");
  const auto k = detail::parse_int(k_param);
  const auto depth = detail::parse_int(depth_param);
  if (!k || *k < 1 || *k > 50) return detail::bad_request("k must be an integer in [1, 50]");
  if (!depth || *depth < 0 || *depth > 3) return detail::bad_request("depth must be an integer in [0, 3]");
  const auto term = normalize_term(raw_term);
  if (term.empty()) return detail::bad_request("empty term");
  const auto& model = *state.model;
  if (!model.contains(term)) return detail::error_reply(404, "UnknownTerm", {{"term", term}});

  std::vector<std::pair<std::string, int>> nodes{{term, 0}};
  std::unordered_set<std::string> seen{term};
  std::vector<std::string> frontier{term};
  for (int level = 1; level <= *depth && !frontier.empty(); ++level) {
    std::vector<std::string> next;
    for (const auto& t : frontier) {
      for (auto& nb : nearest(model, t, static_cast<std::size_t>(*k))) {
        if (seen.insert(nb.term).second) {
          nodes.emplace_back(nb.term, level);
          next.push_back(std::move(nb.term));
        }
      }
    }
    frontier = std::move(next);
  }

  std::vector<std::string> names;
  for (const auto& n : nodes) names.push_back(n.first);
  std::sort(names.begin(), names.end());
  nlohmann::json links = nlohmann::json::array();
  for (std::size_t i = 0; i + 1 < names.size(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      const double raw = similarity(model, names[i], names[j]);
      if (raw >= state.link_threshold) links.push_back({{"source", names[i]}, {"target", names[j]}, {"raw", raw}});
    }
  }
  nlohmann::json body;
  body["term"] = term;
  body["k"] = *k;
  body["depth"] = *depth;
  body["threshold"] = std::isfinite(state.link_threshold) ? nlohmann::json(state.link_threshold) : nlohmann::json();
  body["nodes"] = nlohmann::json::array();
  for (const auto& [id, level] : nodes) body["nodes"].push_back({{"id", id}, {"level", level}});
  body["links"] = std::move(links);
  return {200, body.dump()};
}

/// Nearest terms to the averaged unit vectors of a comma-separated list.
inline Reply handle_compound(const ServeState& state, std::string_view terms_param, std::string_view k_param) {
  if (!state.model) return detail::error_reply(503, "ModelNotLoaded");
  const auto k = detail::parse_int(k_param);
  if (!k || *k < 1 || *k > 50) return detail::bad_request("k must be an integer in [1, 50]");
  std::vector<std::string> terms;
  std::size_t start = 0;
  while (start <= terms_param.size()) {
    auto comma = terms_param.find(',', start);
    if (comma == std::string_view::npos) comma = terms_param.size();
    auto t = normalize_term(terms_param.substr(start, comma - start));
    if (t.empty()) return detail::bad_request("empty term in list");
    terms.push_back(std::move(t));
    start = comma + 1;
  }
  const auto& model = *state.model;
  for (const auto& t : terms) {
    if (!model.contains(t)) return detail::error_reply(404, "UnknownTerm", {{"term", t}});
  }
  std::vector<double> query;
  try {
    query = compound(model, terms);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ZeroVector) return detail::error_reply(422, "ZeroVector");
    throw;
  }
  const std::unordered_set<std::string> exclude(terms.begin(), terms.end());
  nlohmann::json body;
  body["terms"] = terms;
  body["k"] = *k;
  body["neighbors"] = nlohmann::json::array();
  for (const auto& nb : nearest(model, std::span<const double>(query), static_cast<std::size_t>(*k), exclude)) {
    body["neighbors"].push_back({{"term", nb.term}, {"similarity", nb.similarity}});
  }
  return {200, body.dump()};
}

inline const char* fallback_index_html() {
  return R"(<!doctype html>
<html><head><meta charset="utf-8"><title>topic map</title></head>
<body>
<p>The explorer bundle is not installed. Start the server with <code>--static-dir</code>
pointing at the built UI, or fetch the data directly:</p>
<ul><li><a href="/api/map">/api/map</a></li></ul>
</body></html>
)";
}

/// Registers all routes on `server`. `state` must outlive it.
inline void attach(httplib::Server& server, const ServeState& state) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});

  auto send = [](httplib::Response& res, const Reply& reply) {
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type);
  };

  server.Get("/api/map", [&state, send](const httplib::Request&, httplib::Response& res) {
    send(res, handle_map(state));
  });
  server.Get(R"(/api/neighbors/(.+))", [&state, send](const httplib::Request& req, httplib::Response& res) {
    const auto k = req.has_param("k") ? req.get_param_value("k") : std::string("10");
    const auto depth = req.has_param("depth") ? req.get_param_value("depth") : std::string("1");
    send(res, handle_neighbors(state, req.matches[1].str(), k, depth));
  });
  server.Get("/api/compound", [&state, send](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("terms")) return send(res, detail::bad_request("missing terms"));
    const auto k = req.has_param("k") ? req.get_param_value("k") : std::string("10");
    send(res, handle_compound(state, req.get_param_value("terms"), k));
  });

  if (!state.static_dir.empty() && std::filesystem::is_directory(state.static_dir)) {
    server.set_mount_point("/", state.static_dir.string());
  } else {
    server.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(fallback_index_html(), "text/html; charset=utf-8");
    });
  }

  server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string message = "unknown error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
    }
    res.status = 500;
    res.set_content(nlohmann::json{{"error", "Internal"}, {"message", message}}.dump(), "application/json");
  });
}

}  // namespace topicmap::server
