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

#include <sstream>

#include "oracles.hpp"
#include "topicmap/analogy.hpp"

using namespace topicmap;

namespace {

std::string question_file(const std::vector<std::string>& lines, const std::string& section = "synthetic") {
  std::string out = ": " + section + "\n";
  for (const auto& l : lines) out += l + "\n";
  return out;
}

}  // namespace

TEST(ParseQuestions, SectionsCaseAndBlankLines) {
  std::istringstream in(": capital\nAthens Greece Baghdad Iraq\n\n: family\nboy girl brother sister\r\n");
  const auto sections = parse_analogy_questions(in);
  ASSERT_EQ(sections.size(), 2u);
  EXPECT_EQ(sections[0].name, "capital");
  EXPECT_EQ(sections[0].questions[0].a, "athens");
  EXPECT_EQ(sections[0].questions[0].d, "iraq");
  EXPECT_EQ(sections[1].questions[0].line, 5u);
}

TEST(ParseQuestions, MalformedLineReportsLineNumber) {
  std::istringstream in(": s\na b c d\na b c\n");
  try {
    parse_analogy_questions(in);
    FAIL();
  } catch (const MalformedQuestionFileError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(EvaluateAnalogies, ExactRelationScoresOne) {
  const auto fx = oracle::exact_analogy();
  std::istringstream in(question_file(fx.question_lines));
  const auto report = evaluate_analogies(fx.model, in);
  EXPECT_EQ(report.overall.attempted, fx.question_lines.size());
  EXPECT_EQ(report.overall.skipped, 0u);
  EXPECT_DOUBLE_EQ(report.overall.accuracy(), 1.0);
}

TEST(EvaluateAnalogies, PermutedEmbeddingIsNearChance) {
  const auto fx = oracle::exact_analogy();
  const auto shuffled = oracle::permuted(fx.model, 99);
  std::istringstream in(question_file(fx.question_lines));
  const auto report = evaluate_analogies(shuffled, in);
  EXPECT_LE(report.overall.accuracy(), 2.0 / static_cast<double>(shuffled.size()));
}

TEST(EvaluateAnalogies, OutOfVocabularyIsSkippedNeverAttempted) {
  const auto fx = oracle::exact_analogy(5);
  std::istringstream in(question_file({"x0 y0 x1 nothere", "missing y0 x1 y1", "x0 y0 x2 y2"}));
  const auto report = evaluate_analogies(fx.model, in);
  EXPECT_EQ(report.overall.skipped, 2u);
  EXPECT_EQ(report.overall.attempted, 1u);
  EXPECT_EQ(report.overall.correct, 1u);

  std::istringstream all_oov(question_file({"p q r s", "t u v w"}));
  const auto none = evaluate_analogies(fx.model, all_oov);
  EXPECT_EQ(none.overall.attempted, 0u);
  EXPECT_EQ(none.overall.skipped, 2u);
  EXPECT_EQ(none.overall.accuracy(), 0.0);
}

TEST(EvaluateAnalogies, ChanceLevelCountsCandidates) {
  const auto fx = oracle::exact_analogy(5);  // 10 terms
  std::istringstream in(question_file({"x0 y0 x1 y1"}));
  EXPECT_DOUBLE_EQ(evaluate_analogies(fx.model, in).chance_accuracy, 1.0 / 7.0);
}
