// Copyright 2026 The tabilp Authors
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

#ifndef TABILP_ERROR_HPP
#define TABILP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace tabilp {

enum class ErrorCode {
  kInvalidArgument = 1,
  kIo = 2,
  kParse = 3,
  kInternal = 4,
};

// All library failures surface as this exception; the C API maps `code()`
// onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void ThrowInvalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, what);
}
[[noreturn]] inline void ThrowIo(const std::string& what) {
  throw Error(ErrorCode::kIo, what);
}
[[noreturn]] inline void ThrowParse(const std::string& what) {
  throw Error(ErrorCode::kParse, what);
}
[[noreturn]] inline void ThrowInternal(const std::string& what) {
  throw Error(ErrorCode::kInternal, what);
}

}  // namespace tabilp

#endif  // TABILP_ERROR_HPP
