// Copyright 2026 The maskcoref Authors.
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

#ifndef MASKCOREF_ERROR_H_
#define MASKCOREF_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace maskcoref {

// Every failure raised by the library carries one of these codes. The code
// determines the module prefix and the process exit code used by the CLI.
enum class ErrorCode {
  // corpus
  kMalformedColumnCount,
  kUnbalancedCorefBracket,
  kDuplicateDocId,
  kUnknownDocId,
  kNegativeCount,
  // features
  kNoAntecedent,
  kOrderViolation,
  kZeroVariance,
  kEmptyFilter,
  kJoinMiss,
  // masking
  kBadSubsetIndex,
  kNoMaskableMentions,
  // scoring
  kNonFiniteScore,
  kUnknownEntity,
  kSchemaViolation,
  kDanglingMentionRef,
  kDuplicateEntry,
  kMissingCandidate,
  // evalmetrics
  kMissingPrediction,
  // predictability
  kEntityNotInSupport,
  kNotNormalized,
  kEmptyJoin,
  kLengthMismatch,
  kDegenerateRanks,
  // stats
  kRankDeficient,
  kSeparation,
  kNonConvergence,
  kTooFewRows,
  kNotNested,
  kRowMismatch,
  kZeroResidual,
  kInvalidParameter,
  kColumnMismatch,
  kClassMissing,
  // report
  kEmptyData,
  kNegativeProbability,
  kTooFewPoints,
  kUnknownColumn,
  // generic
  kIo,
  kInvalidArgument,
};

// Exit-code family of an error.
enum class ErrorCategory { kInput = 2, kReference = 3, kNumerical = 4 };

// "module.Name", e.g. "corpus.UnbalancedCorefBracket".
std::string_view ErrorCodeName(ErrorCode code);
ErrorCategory CategoryOf(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message);

  ErrorCode code() const { return code_; }
  ErrorCategory category() const { return CategoryOf(code_); }
  int exit_code() const { return static_cast<int>(category()); }

 private:
  ErrorCode code_;
};

}  // namespace maskcoref

#endif  // MASKCOREF_ERROR_H_
