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

#include "maskcoref/error.h"

namespace maskcoref {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedColumnCount: return "corpus.MalformedColumnCount";
    case ErrorCode::kUnbalancedCorefBracket: return "corpus.UnbalancedCorefBracket";
    case ErrorCode::kDuplicateDocId: return "corpus.DuplicateDocId";
    case ErrorCode::kUnknownDocId: return "corpus.UnknownDocId";
    case ErrorCode::kNegativeCount: return "corpus.NegativeCount";
    case ErrorCode::kNoAntecedent: return "features.NoAntecedent";
    case ErrorCode::kOrderViolation: return "features.OrderViolation";
    case ErrorCode::kZeroVariance: return "features.ZeroVariance";
    case ErrorCode::kEmptyFilter: return "features.EmptyFilter";
    case ErrorCode::kJoinMiss: return "features.JoinMiss";
    case ErrorCode::kBadSubsetIndex: return "masking.BadSubsetIndex";
    case ErrorCode::kNoMaskableMentions: return "masking.NoMaskableMentions";
    case ErrorCode::kNonFiniteScore: return "scoring.NonFiniteScore";
    case ErrorCode::kUnknownEntity: return "scoring.UnknownEntity";
    case ErrorCode::kSchemaViolation: return "scoring.SchemaViolation";
    case ErrorCode::kDanglingMentionRef: return "scoring.DanglingMentionRef";
    case ErrorCode::kDuplicateEntry: return "scoring.DuplicateEntry";
    case ErrorCode::kMissingCandidate: return "scoring.MissingCandidate";
    case ErrorCode::kMissingPrediction: return "evalmetrics.MissingPrediction";
    case ErrorCode::kEntityNotInSupport: return "predictability.EntityNotInSupport";
    case ErrorCode::kNotNormalized: return "predictability.NotNormalized";
    case ErrorCode::kEmptyJoin: return "predictability.EmptyJoin";
    case ErrorCode::kLengthMismatch: return "predictability.LengthMismatch";
    case ErrorCode::kDegenerateRanks: return "predictability.DegenerateRanks";
    case ErrorCode::kRankDeficient: return "stats.RankDeficient";
    case ErrorCode::kSeparation: return "stats.Separation";
    case ErrorCode::kNonConvergence: return "stats.NonConvergence";
    case ErrorCode::kTooFewRows: return "stats.TooFewRows";
    case ErrorCode::kNotNested: return "stats.NotNested";
    case ErrorCode::kRowMismatch: return "stats.RowMismatch";
    case ErrorCode::kZeroResidual: return "stats.ZeroResidual";
    case ErrorCode::kInvalidParameter: return "stats.InvalidParameter";
    case ErrorCode::kColumnMismatch: return "stats.ColumnMismatch";
    case ErrorCode::kClassMissing: return "stats.ClassMissing";
    case ErrorCode::kEmptyData: return "report.EmptyData";
    case ErrorCode::kNegativeProbability: return "report.NegativeProbability";
    case ErrorCode::kTooFewPoints: return "report.TooFewPoints";
    case ErrorCode::kUnknownColumn: return "report.UnknownColumn";
    case ErrorCode::kIo: return "io.IoError";
    case ErrorCode::kInvalidArgument: return "cli.InvalidArgument";
  }
  return "unknown";
}

ErrorCategory CategoryOf(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownDocId:
    case ErrorCode::kNoAntecedent:
    case ErrorCode::kOrderViolation:
    case ErrorCode::kJoinMiss:
    case ErrorCode::kBadSubsetIndex:
    case ErrorCode::kUnknownEntity:
    case ErrorCode::kDanglingMentionRef:
    case ErrorCode::kDuplicateEntry:
    case ErrorCode::kMissingCandidate:
    case ErrorCode::kMissingPrediction:
    case ErrorCode::kEntityNotInSupport:
    case ErrorCode::kEmptyJoin:
      return ErrorCategory::kReference;
    case ErrorCode::kZeroVariance:
    case ErrorCode::kEmptyFilter:
    case ErrorCode::kNoMaskableMentions:
    case ErrorCode::kNonFiniteScore:
    case ErrorCode::kNotNormalized:
    case ErrorCode::kDegenerateRanks:
    case ErrorCode::kRankDeficient:
    case ErrorCode::kSeparation:
    case ErrorCode::kNonConvergence:
    case ErrorCode::kTooFewRows:
    case ErrorCode::kNotNested:
    case ErrorCode::kRowMismatch:
    case ErrorCode::kZeroResidual:
    case ErrorCode::kColumnMismatch:
    case ErrorCode::kClassMissing:
    case ErrorCode::kTooFewPoints:
      return ErrorCategory::kNumerical;
    default:
      return ErrorCategory::kInput;
  }
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace maskcoref
