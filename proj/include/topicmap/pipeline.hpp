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

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "topicmap/clusters.hpp"
#include "topicmap/corpus.hpp"
#include "topicmap/embedding.hpp"
#include "topicmap/mapbuilder.hpp"

namespace topicmap {

struct BuildOptions {
  TrainParams train;
  MapParams map;
  PhraseParams phrases;
  bool detect_phrases = true;
  std::unordered_set<std::string> stopwords = default_stopwords();
  bool communities = true;
  CommunityParams community;
};

struct BuildResult {
  TopicMap map;
  std::vector<std::string> warnings;
};

/// Turns a trained model plus term counts into a topic map: top-N terms that
/// have vectors, complete similarity graph, base-layer prune at the base
/// percentile with the P-level subgraph flagged primary, min-max weights,
/// then communities on the primary links.
inline BuildResult map_from_model(const EmbeddingModel& model, const Vocabulary& counts, const BuildOptions& opts) {
  opts.map.validate();
  BuildResult result;
  auto& warnings = result.warnings;

  if (counts.size() < opts.map.terms) {
    warnings.push_back("FewerTermsThanRequested: " + std::to_string(counts.size()) + " usable terms, " +
                       std::to_string(opts.map.terms) + " requested");
  }
  std::vector<std::string> terms;
  std::size_t dropped = 0;
  for (auto& t : top_terms(counts, opts.map.terms)) {
    if (model.contains(t)) {
      terms.push_back(std::move(t));
    } else {
      ++dropped;
    }
  }
  if (dropped > 0) {
    warnings.push_back("dropped " + std::to_string(dropped) + " frequent terms without a trained vector");
  }
  if (terms.size() < 2) throw Error(ErrorCode::EmptyCorpus, "fewer than two mappable terms");

  std::size_t cap = opts.map.cap;
  if (cap > terms.size() - 1) {
    cap = terms.size() - 1;
    warnings.push_back("cap lowered to " + std::to_string(cap) + " for " + std::to_string(terms.size()) + " terms");
  }

  const auto complete = build_complete_similarity(model, terms);
  auto base = prune(complete, opts.map.base_percentile, cap);
  const auto strict = prune(complete, opts.map.percentile, cap);
  // Both are canonically sorted and strict is a subset of base.
  std::size_t j = 0;
  for (auto& link : base.links()) {
    const auto& s = strict.links();
    link.primary = j < s.size() && s[j].source == link.source && s[j].target == link.target;
    if (link.primary) ++j;
  }

  TopicMap& map = result.map;
  map.graph = normalize(base);
  for (auto& node : map.graph.nodes()) node.freq = counts.count(node.term);
  map.map_params = opts.map;
  map.train_params = model.params();
  map.corpus = {counts.total_documents, counts.total_tokens, counts.size()};

  if (opts.communities) {
    const auto primary = map.graph.filtered([](const TermLink& l) { return l.primary; });
    map.communities = detect_communities(primary, opts.community).primary;
  }
  return result;
}

/// Full pipeline. `documents` are tokenized texts; vectors are trained on
/// them. Term counts come from `count_documents` when given (a foreground
/// corpus), otherwise from the training corpus. Phrases learned on the
/// training corpus are applied to both.
inline BuildResult build_map(const std::vector<Document>& documents,
                             const std::optional<std::vector<Document>>& count_documents,
                             const BuildOptions& opts, EmbeddingModel* trained = nullptr) {
  opts.train.validate();
  opts.map.validate();
  std::vector<Document> train_docs;
  std::optional<std::vector<Document>> fg_docs;
  if (opts.detect_phrases) {
    const auto table = learn_phrases(documents, opts.phrases);
    train_docs = apply_phrases(table, documents);
    if (count_documents) fg_docs = apply_phrases(table, *count_documents);
  } else {
    train_docs = documents;
    fg_docs = count_documents;
  }
  auto model = train(train_docs, opts.train);
  const auto counts = count_terms(fg_docs ? *fg_docs : train_docs, opts.stopwords, opts.train.min_count);
  auto result = map_from_model(model, counts, opts);
  result.map.train_params = opts.train;
  if (trained) *trained = std::move(model);
  return result;
}

}  // namespace topicmap
