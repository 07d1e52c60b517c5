// Copyright 2026 The refprice Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "refprice/error.h"

namespace refprice {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput:
      return "InvalidInput";
    case ErrorKind::kNoAdmissibleBids:
      return "NoAdmissibleBids";
    case ErrorKind::kDegenerateSample:
      return "DegenerateSample";
    case ErrorKind::kParseError:
      return "ParseError";
    case ErrorKind::kUsageError:
      return "UsageError";
  }
  return "Unknown";
}

namespace {

std::string Decorate(ErrorKind kind, const std::string& message, int line) {
  std::string out = ErrorKindName(kind);
  if (line > 0) out += " (line " + std::to_string(line) + ")";
  return out + ": " + message;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message, int line)
    : std::runtime_error(Decorate(kind, message, line)),
      kind_(kind),
      line_(line) {}

}  // namespace refprice
