/*
 * Copyright 2026 The pathsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PATHSIM_ERROR_HPP_
#define PATHSIM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace pathsim {

enum class Errc {
  invalid_argument,
  invalid_address,
  allocation_failure,
  use_after_termination,
  context_exhaustion,
  io_error,
};

const char* to_string(Errc code);

/// Every failure raised by the simulator carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace pathsim

#endif  // PATHSIM_ERROR_HPP_
