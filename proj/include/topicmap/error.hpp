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

#include <stdexcept>
#include <string>
#include <utility>

namespace topicmap {

/// Machine-readable failure category. The name of each code is what the CLI
/// prints and what the HTTP layer puts in its `error` field.
enum class ErrorCode {
  EmptyCorpus,
  InvalidParams,
  UnknownTerm,
  ZeroVector,
  MalformedQuestionFile,
  EmptyInput,
  EmptyGraph,
  Io,
  MalformedMap,
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::UnknownTerm: return "UnknownTerm";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::MalformedQuestionFile: return "MalformedQuestionFile";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::Io: return "Io";
    case ErrorCode::MalformedMap: return "MalformedMap";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Lookup of a term that is not in the model vocabulary.
class UnknownTermError : public Error {
 public:
  explicit UnknownTermError(std::string term)
      : Error(ErrorCode::UnknownTerm, "term not in vocabulary: '" + term + "'"),
        term_(std::move(term)) {}

  const std::string& term() const noexcept { return term_; }

 private:
  std::string term_;
};

class MalformedQuestionFileError : public Error {
 public:
  MalformedQuestionFileError(std::size_t line, const std::string& why)
      : Error(ErrorCode::MalformedQuestionFile, "line " + std::to_string(line) + ": " + why),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace topicmap
