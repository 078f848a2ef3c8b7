/*
   Copyright 2026 The skelforge Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skelforge {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed user input: hex text, JSON lines, CSV rows.
class InputError : public Error {
  public:
    using Error::Error;
};

// Lookup of a mnemonic, tool, class or finding that the tables do not know.
class LookupError : public Error {
  public:
    using Error::Error;
};

// A bundled or user-supplied table violates its structural invariants.
class TableError : public Error {
  public:
    using Error::Error;
};

class HexError : public InputError {
  public:
    HexError(const std::string& what, std::size_t offset) : InputError(what), offset_(offset) {}

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

  private:
    std::size_t offset_;
};

}  // namespace skelforge
