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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <skelforge/bytes.hpp>

// Just enough CBOR (RFC 8949) to read compiler metadata maps: definite-length
// items only, nested values are validated and skipped.
namespace skelforge::cbor {

enum class Kind { unsigned_int, negative_int, byte_string, text_string, array, map, tag, simple, floating };

struct Value {
    Kind kind{Kind::simple};
    std::uint64_t number{0};  // integer value, simple value, or container length
    Bytes bytes;              // byte_string payload
    std::string text;         // text_string payload
};

struct MapEntry {
    std::string key;
    Value value;
};

// Decodes `data` as exactly one map with text-string keys and no trailing
// bytes. Returns nullopt for anything else (truncation, indefinite lengths,
// non-text keys, nesting deeper than a fixed limit).
std::optional<std::vector<MapEntry>> decode_text_keyed_map(ByteView data);

}  // namespace skelforge::cbor
