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

#ifndef REFPRICE_ERROR_H_
#define REFPRICE_ERROR_H_

#include <stdexcept>
#include <string>

namespace refprice {

enum class ErrorKind {
  kInvalidInput,
  kNoAdmissibleBids,
  kDegenerateSample,
  kParseError,
  kUsageError,
};

const char* ErrorKindName(ErrorKind kind);

// All library failures are reported through this exception type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, int line = 0);

  ErrorKind kind() const { return kind_; }
  // 1-based input line for parse errors, 0 otherwise.
  int line() const { return line_; }

 private:
  ErrorKind kind_;
  int line_;
};

}  // namespace refprice

#endif  // REFPRICE_ERROR_H_
