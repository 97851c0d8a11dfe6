// Copyright 2026 The icistat Authors
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

namespace icistat {

/// Error categories. Values are stable: the C API reports them as status codes.
enum class Errc : int {
  invalid_argument = 1,
  out_of_range = 2,
  numerical_failure = 3,
  io_error = 4,
  parse_error = 5,
  cache_mismatch = 6,
  not_converged = 7,
  invalid_parameter = 8,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Errc code, const char* what) {
  if (!ok) fail(code, what);
}

}  // namespace icistat
