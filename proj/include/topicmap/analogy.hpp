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

#include <cmath>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "topicmap/corpus.hpp"
#include "topicmap/embedding.hpp"
#include "topicmap/error.hpp"

namespace topicmap {

struct AnalogyQuestion {
  std::string a, b, c, d;
  std::size_t line = 0;
};

struct AnalogySection {
  std::string name;
  std::vector<AnalogyQuestion> questions;
};

/// Parses the questions-words format: ": name" opens a section, every other
/// non-blank line holds exactly four terms. Questions before the first
/// header land in an unnamed section.
inline std::vector<AnalogySection> parse_analogy_questions(std::istream& in) {
  std::vector<AnalogySection> sections;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind(": ", 0) == 0) {
      sections.push_back({line.substr(2), {}});
      continue;
    }
    std::istringstream fields(line);
    std::vector<std::string> words;
    for (std::string w; fields >> w;) words.push_back(std::move(w));
    if (words.empty()) continue;
    if (words.size() != 4) {
      throw MalformedQuestionFileError(lineno, "expected 4 terms, found " + std::to_string(words.size()));
    }
    AnalogyQuestion q{normalize_term(words[0]), normalize_term(words[1]), normalize_term(words[2]),
                      normalize_term(words[3]), lineno};
    if (q.a.empty() || q.b.empty() || q.c.empty() || q.d.empty()) {
      throw MalformedQuestionFileError(lineno, "term normalizes to nothing");
    }
    if (sections.empty()) sections.push_back({"", {}});
    sections.back().questions.push_back(std::move(q));
  }
  return sections;
}

struct AnalogyScore {
  std::string name;
  std::size_t correct = 0;
  std::size_t attempted = 0;
  std::size_t skipped = 0;

  double accuracy() const noexcept {
    return attempted == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(attempted);
  }
};

struct AnalogyReport {
  std::vector<AnalogyScore> sections;
  AnalogyScore overall{"total"};
  /// Expected accuracy of uniform guessing over the candidate set, averaged
  /// over attempted questions.
  double chance_accuracy = 0;
};

/// Predicts d as the argmax-cosine term to unit(b) - unit(a) + unit(c) over
/// the vocabulary minus {a, b, c}. Questions with any out-of-vocabulary term
/// are skipped.
inline AnalogyReport evaluate_analogies(const EmbeddingModel& model, const std::vector<AnalogySection>& sections) {
  const std::size_t dim = model.dim();
  const std::size_t n = model.size();
  std::vector<float> unit(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    const double norm = model.norm(i);
    const auto row = model.row(i);
    for (std::size_t k = 0; k < dim; ++k) {
      unit[i * dim + k] = norm == 0 ? 0.0f : static_cast<float>(row[k] / norm);
    }
  }
  const auto& terms = model.terms();

  AnalogyReport report;
  double chance_sum = 0;
  std::vector<float> target(dim);
  for (const auto& section : sections) {
    AnalogyScore score{section.name};
    for (const auto& q : section.questions) {
      const auto ia = model.find(q.a);
      const auto ib = model.find(q.b);
      const auto ic = model.find(q.c);
      const auto id = model.find(q.d);
      if (!ia || !ib || !ic || !id) {
        ++score.skipped;
        continue;
      }
      for (std::size_t k = 0; k < dim; ++k) {
        target[k] = unit[*ib * dim + k] - unit[*ia * dim + k] + unit[*ic * dim + k];
      }
      std::size_t best = n;
      float best_score = -INFINITY;
      for (std::size_t w = 0; w < n; ++w) {
        if (w == *ia || w == *ib || w == *ic) continue;
        const float* v = unit.data() + w * dim;
        float s = 0;
        for (std::size_t k = 0; k < dim; ++k) s += target[k] * v[k];
        if (best == n || s > best_score || (s == best_score && terms[w] < terms[best])) {
          best = w;
          best_score = s;
        }
      }
      ++score.attempted;
      if (best == *id) ++score.correct;
      std::size_t excluded = 1 + (*ib != *ia) + (*ic != *ia && *ic != *ib);
      if (n > excluded) chance_sum += 1.0 / static_cast<double>(n - excluded);
    }
    report.overall.correct += score.correct;
    report.overall.attempted += score.attempted;
    report.overall.skipped += score.skipped;
    report.sections.push_back(std::move(score));
  }
  if (report.overall.attempted > 0) {
    report.chance_accuracy = chance_sum / static_cast<double>(report.overall.attempted);
  }
  return report;
}

inline AnalogyReport evaluate_analogies(const EmbeddingModel& model, std::istream& questions) {
  return evaluate_analogies(model, parse_analogy_questions(questions));
}

}  // namespace topicmap
