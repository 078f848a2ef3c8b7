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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace skelforge {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// Lowercase hex, no prefix.
std::string to_hex(ByteView bytes);

// Accepts an optional 0x/0X prefix and surrounding whitespace. Throws
// HexError carrying the offending offset (relative to the trimmed text,
// prefix included) on odd length or a non-hex character.
Bytes from_hex(std::string_view text);

}  // namespace skelforge
