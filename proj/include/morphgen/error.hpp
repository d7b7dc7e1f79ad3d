// Copyright 2026 The Morphgen Authors.
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

#pragma once

#include <stdexcept>
#include <string>

namespace morphgen {

enum class ErrorKind {
  format,        // malformed input bytes (STL, MGVX, MGSF, JSON, CSV)
  validation,    // violated precondition or invariant on otherwise well-formed data
  io,            // filesystem read/write failure
  empty_result,  // an operation found nothing to produce (no interface, no hits)
  conditioning,  // numerically singular linear algebra
  integrity,     // checksum mismatch against a manifest
};

/// Single exception type for the whole library; `kind` drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace morphgen
