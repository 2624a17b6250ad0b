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

// Command-line front end: train, eval, build, suggest-v, communities, serve.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "json_config.hpp"
#include "topicmap/server.hpp"
#include "topicmap/topicmap.hpp"

namespace fs = std::filesystem;
using namespace topicmap;

namespace {

struct CorpusFlags {
  std::string input;
  std::string counts_input;
  std::string stopwords;
  bool no_stopwords = false;
  bool no_phrases = false;
  PhraseParams phrases;
};

struct CommunityFlags {
  bool disabled = false;
  int max_iters = 100;
  double membership_threshold = 0.3;
};

void add_train_flags(CLI::App* cmd, TrainParams& p) {
  cmd->add_option("--vector-size", p.vector_size, "Vector dimensions (V)")->capture_default_str();
  cmd->add_option("--context", p.context, "Context size, words each side (C)")->capture_default_str();
  cmd->add_option("--epochs", p.epochs, "Training epochs (E)")->capture_default_str();
  cmd->add_option("--negatives", p.negatives, "Negative samples per context word")->capture_default_str();
  cmd->add_option("--subsample", p.subsample, "Frequent-word subsampling threshold, 0 disables")->capture_default_str();
  cmd->add_option("--learning-rate", p.learning_rate, "Initial learning rate")->capture_default_str();
  cmd->add_option("--min-count", p.min_count, "Drop terms rarer than this")->capture_default_str();
  cmd->add_option("--seed", p.seed, "Seed for every random choice")->capture_default_str();
  cmd->add_option("--workers", p.workers, "Training threads; 1 is reproducible")->capture_default_str();
}

void add_corpus_flags(CLI::App* cmd, CorpusFlags& c, bool with_counts) {
  cmd->add_option("--input", c.input, "Directory of .txt documents or a file with one document per line")
      ->required();
  if (with_counts) {
    cmd->add_option("--counts-input", c.counts_input, "Foreground corpus for term frequencies");
    auto* sw = cmd->add_option("--stopwords", c.stopwords, "Stopword file, one term per line");
    cmd->add_flag("--no-stopwords", c.no_stopwords, "Keep stopwords in the map")->excludes(sw);
  }
  cmd->add_flag("--no-phrases", c.no_phrases, "Skip bigram phrase detection");
  cmd->add_option("--phrase-discount", c.phrases.discount, "Phrase score discount")->capture_default_str();
  cmd->add_option("--phrase-threshold", c.phrases.threshold, "Phrase score threshold")->capture_default_str();
}

void add_community_flags(CLI::App* cmd, CommunityFlags& c, bool allow_disable) {
  if (allow_disable) cmd->add_flag("--no-communities", c.disabled, "Leave community ids null");
  cmd->add_option("--max-iters", c.max_iters, "Label propagation sweep limit")->capture_default_str();
  cmd->add_option("--membership-threshold", c.membership_threshold, "Minimum strength of a secondary membership")
      ->capture_default_str();
}

// CLI11 only reads config files on the root app, so --config lives there and
// subcommands fall through to it. The note keeps it visible in their help.
void enable_config(CLI::App* cmd) {
  cmd->fallthrough();
  cmd->footer("  --config TEXT    JSON file with flag values for this command; explicit flags win");
}

std::vector<Document> load_corpus(const std::string& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::Io, "no such corpus: " + path);
  return load_documents(path);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_train(const CorpusFlags& corpus, const TrainParams& params, const std::string& model_out) {
  const auto start = std::chrono::steady_clock::now();
  auto docs = load_corpus(corpus.input);
  if (!corpus.no_phrases) docs = apply_phrases(learn_phrases(docs, corpus.phrases), docs);
  const auto model = train(docs, params);
  save_model(model, fs::path(model_out));
  std::uint64_t tokens = 0;
  for (const auto& d : docs) tokens += d.tokens.size();
  std::printf("vocab %zu\ntokens %llu\nseconds %.2f\n", model.size(), static_cast<unsigned long long>(tokens),
              seconds_since(start));
  return 0;
}

int cmd_eval(const std::string& model_path, const std::string& questions_path) {
  const auto model = load_model(fs::path(model_path));
  std::ifstream in(questions_path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + questions_path);
  const auto report = evaluate_analogies(model, in);
  for (const auto& s : report.sections) {
    std::printf("%s: %zu/%zu %.4f (skipped %zu)\n", s.name.empty() ? "(unnamed)" : s.name.c_str(), s.correct,
                s.attempted, s.accuracy(), s.skipped);
  }
  std::printf("attempted %zu\nskipped %zu\nchance %.6f\ntotal %.4f\n", report.overall.attempted,
              report.overall.skipped, report.chance_accuracy, report.overall.accuracy());
  return 0;
}

int cmd_build(const CorpusFlags& corpus, const TrainParams& train_params, const MapParams& map_params,
              const CommunityFlags& comm, const std::string& model_path, const std::string& model_out,
              const std::string& out) {
  const auto start = std::chrono::steady_clock::now();
  BuildOptions opts;
  opts.train = train_params;
  opts.map = map_params;
  opts.phrases = corpus.phrases;
  opts.detect_phrases = !corpus.no_phrases;
  if (corpus.no_stopwords) {
    opts.stopwords.clear();
  } else if (!corpus.stopwords.empty()) {
    opts.stopwords = load_stopwords(corpus.stopwords);
  }
  opts.communities = !comm.disabled;
  opts.community = {train_params.seed, comm.max_iters, comm.membership_threshold};

  const auto docs = load_corpus(corpus.input);
  std::optional<std::vector<Document>> fg;
  if (!corpus.counts_input.empty()) fg = load_corpus(corpus.counts_input);

  BuildResult result;
  if (!model_path.empty()) {
    const auto model = load_model(fs::path(model_path));
    std::vector<Document> count_docs = fg ? *fg : docs;
    if (opts.detect_phrases) count_docs = apply_phrases(learn_phrases(docs, opts.phrases), count_docs);
    const auto counts = count_terms(count_docs, opts.stopwords, opts.train.min_count);
    result = map_from_model(model, counts, opts);
    result.map.train_params = opts.train;
    result.map.train_params.vector_size = static_cast<int>(model.dim());
  } else {
    EmbeddingModel model;
    result = build_map(docs, fg, opts, &model);
    if (!model_out.empty()) save_model(model, fs::path(model_out));
  }
  for (const auto& w : result.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  write_file(out, to_json(result.map));
  std::size_t primary = 0;
  for (const auto& l : result.map.graph.links()) primary += l.primary;
  std::printf("nodes %zu\nlinks %zu\nprimary %zu\nseconds %.2f\n", result.map.graph.nodes().size(),
              result.map.graph.links().size(), primary, seconds_since(start));
  return 0;
}

int cmd_communities(const std::string& map_path, const std::string& out, std::uint64_t seed,
                    const CommunityFlags& comm) {
  auto map = parse_topic_map(read_file(map_path));
  const auto primary = map.graph.filtered([](const TermLink& l) { return l.primary; });
  const auto found = detect_communities(primary, {seed, comm.max_iters, comm.membership_threshold});
  map.communities = found.primary;
  if (!out.empty()) write_file(out, to_json(map));

  std::map<int, std::vector<std::string>> groups;
  for (std::size_t i = 0; i < found.primary.size(); ++i) groups[found.primary[i]].push_back(map.graph.term(i));
  std::printf("communities %d (%s after %d sweeps)\n", found.count, found.converged ? "converged" : "stopped",
              found.iterations);
  for (const auto& [id, members] : groups) {
    std::printf("%d:", id);
    for (const auto& m : members) std::printf(" %s", m.c_str());
    std::printf("\n");
  }
  for (std::size_t i = 0; i < found.memberships.size(); ++i) {
    if (found.memberships[i].size() < 2) continue;
    std::printf("overlap %s:", map.graph.term(i).c_str());
    for (const auto& m : found.memberships[i]) std::printf(" %d=%.3f", m.community, m.strength);
    std::printf("\n");
  }
  return 0;
}

int cmd_serve(const std::string& map_path, const std::string& model_path, const std::string& static_dir,
              const std::string& host, int port) {
  std::optional<std::string> map_json;
  if (!map_path.empty()) map_json = read_file(map_path);
  std::optional<EmbeddingModel> model;
  if (!model_path.empty()) model = load_model(fs::path(model_path));
  const auto state = server::make_state(std::move(map_json), std::move(model), static_dir);
  httplib::Server http;
  server::attach(http, state);
  std::printf("serving on http://%s:%d/\n", host.c_str(), port);
  std::fflush(stdout);
  if (!http.listen(host, port)) throw Error(ErrorCode::Io, "cannot listen on " + host + ":" + std::to_string(port));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build and explore topic maps from word vectors"};
  app.require_subcommand(1);
  app.set_config("--config", "", "JSON file with flag values; explicit flags win");
  app.config_formatter(std::make_shared<cli::JsonConfig>(&app));
  app.allow_config_extras(CLI::config_extras_mode::ignore);

  CorpusFlags corpus;
  TrainParams train_params;
  MapParams map_params;
  CommunityFlags comm;
  std::string model_path;
  std::string model_out;
  std::string out;
  std::string questions;
  std::string map_path;
  std::string static_dir;
  std::string host = "127.0.0.1";
  int port = server::kDefaultPort;
  int ref_v = 250;
  std::uint64_t ref_vocab = 167000;
  std::uint64_t vocab = 0;

  auto* train_cmd = app.add_subcommand("train", "Train word vectors and write a model file");
  add_corpus_flags(train_cmd, corpus, false);
  add_train_flags(train_cmd, train_params);
  train_cmd->add_option("--model-out", model_out, "Model file to write")->required();
  enable_config(train_cmd);

  auto* eval_cmd = app.add_subcommand("eval", "Score a model on an analogy question file");
  eval_cmd->add_option("--model", model_path, "Model file")->required();
  eval_cmd->add_option("--questions", questions, "Analogy questions (questions-words format)")->required();
  enable_config(eval_cmd);

  auto* build_cmd = app.add_subcommand("build", "Build a topic map JSON from a corpus");
  add_corpus_flags(build_cmd, corpus, true);
  add_train_flags(build_cmd, train_params);
  build_cmd->add_option("--terms", map_params.terms, "Number of frequent terms (N)")->capture_default_str();
  build_cmd->add_option("--percentile", map_params.percentile, "Link percentile threshold (P)")->capture_default_str();
  build_cmd->add_option("--base-percentile", map_params.base_percentile, "Exported relaxed layer percentile")
      ->capture_default_str();
  build_cmd->add_option("--cap", map_params.cap, "Maximum links per term (L)")->capture_default_str();
  add_community_flags(build_cmd, comm, true);
  auto* fixed_model = build_cmd->add_option("--model", model_path, "Use this model instead of training");
  build_cmd->add_option("--model-out", model_out, "Also save the trained model here")->excludes(fixed_model);
  build_cmd->add_option("--out", out, "Map JSON to write")->required();
  enable_config(build_cmd);

  auto* suggest_cmd = app.add_subcommand("suggest-v", "Scale a reference vector size to a vocabulary size");
  suggest_cmd->add_option("--ref-v", ref_v, "Reference vector size")->capture_default_str();
  suggest_cmd->add_option("--ref-vocab", ref_vocab, "Reference vocabulary size")->capture_default_str();
  suggest_cmd->add_option("--vocab", vocab, "Target vocabulary size")->required();
  enable_config(suggest_cmd);

  auto* comm_cmd = app.add_subcommand("communities", "Detect communities on a built map");
  comm_cmd->add_option("--map", map_path, "Map JSON")->required();
  comm_cmd->add_option("--out", out, "Write the map with community ids here");
  comm_cmd->add_option("--seed", train_params.seed, "Shuffle seed")->capture_default_str();
  add_community_flags(comm_cmd, comm, false);
  enable_config(comm_cmd);

  auto* serve_cmd = app.add_subcommand("serve", "Serve a map and live neighbourhood queries over HTTP");
  serve_cmd->add_option("--map", map_path, "Map JSON")->required();
  serve_cmd->add_option("--model", model_path, "Model file enabling /api/neighbors and /api/compound");
  serve_cmd->add_option("--port", port, "TCP port")->capture_default_str();
  serve_cmd->add_option("--host", host, "Bind address")->capture_default_str();
  serve_cmd->add_option("--static-dir", static_dir, "Directory with the built explorer UI");
  enable_config(serve_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd || *build_cmd) train_params.validate();
    if (*build_cmd) map_params.validate();
    if (comm.max_iters < 1) throw Error(ErrorCode::InvalidParams, "max-iters must be >= 1");
    if (*serve_cmd && (port < 0 || port > 65535)) throw Error(ErrorCode::InvalidParams, "port out of range");

    if (*train_cmd) return cmd_train(corpus, train_params, model_out);
    if (*eval_cmd) return cmd_eval(model_path, questions);
    if (*build_cmd) return cmd_build(corpus, train_params, map_params, comm, model_path, model_out, out);
    if (*suggest_cmd) {
      std::printf("%d\n", suggest_vector_size(ref_v, ref_vocab, vocab));
      return 0;
    }
    if (*comm_cmd) return cmd_communities(map_path, out, train_params.seed, comm);
    if (*serve_cmd) return cmd_serve(map_path, model_path, static_dir, host, port);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
