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

#ifndef MASKCOREF_SRC_JSON_INTERNAL_H_
#define MASKCOREF_SRC_JSON_INTERNAL_H_

#include <string_view>

#include "json.hpp"
#include "maskcoref/corpus.h"

namespace maskcoref::internal {

nlohmann::json CorpusToJsonValue(const Corpus &corpus);
Corpus CorpusFromJsonValue(const nlohmann::json &value);

// Throws SchemaViolation with `what` as context.
nlohmann::json ParseJson(std::string_view text, std::string_view what);

}  // namespace maskcoref::internal

#endif  // MASKCOREF_SRC_JSON_INTERNAL_H_
