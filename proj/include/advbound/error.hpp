// Copyright 2026 The advbound Authors.
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
#include <string_view>

namespace advbound {

// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
  kUsage,         // bad arguments or preconditions supplied by the caller
  kParse,         // malformed text input
  kFormat,        // malformed binary input
  kEmptyDataset,  // nothing left after filtering
  kCapacity,      // not enough mass to draw the requested sample
  kDimension,     // vector / matrix shapes disagree
  kUndefined,     // statistic undefined for this input (e.g. empty class)
  kOverflow,      // exact integer arithmetic would not fit
  kNumeric,       // ill-conditioned or invalid numeric input (non-SPD, ...)
  kUnsupported,   // valid but unimplemented combination of options
  kCancelled,     // stopped by a deadline / stop request
  kInternal,      // broken algorithm invariant
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace advbound
