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
#include <optional>
#include <string>
#include <vector>

#include <skelforge/bytes.hpp>
#include <skelforge/version.hpp>

namespace skelforge {

enum class CodeKind { runtime, deployment };
enum class StripMode { remove, zero_fill };

// A compiler metadata trailer: one CBOR map followed by its big-endian 16-bit
// length. Offsets are relative to the scanned input; `end` points past the
// length field.
struct MetadataSection {
    std::size_t start{0};
    std::size_t end{0};
    std::vector<std::string> cbor_keys;  // in encoding order
    std::optional<SolcVersion> solc_version;
    Bytes raw;  // [start, end) including the length field

    [[nodiscard]] std::size_t size() const noexcept { return end - start; }
};

struct StripResult {
    Bytes stripped;
    std::vector<MetadataSection> sections;  // offsets relative to the original input
    StripMode mode{StripMode::remove};
    // Deployment code only: bytes after the last metadata section.
    std::size_t constructor_arg_bytes{0};
};

// Keys a metadata map may carry, and the subset that identifies the source.
bool is_metadata_key(std::string_view key) noexcept;
bool is_source_hash_key(std::string_view key) noexcept;

// Candidate ends are tried right to left. A candidate is accepted when the
// length field frames exactly one CBOR map whose keys are all metadata keys
// and include a source hash. Accepted sections never overlap (the rightmost
// wins) and are returned sorted by start.
std::vector<MetadataSection> find_metadata(ByteView code);

// Removes or zeroes every section found by find_metadata. For deployment
// code the bytes trailing the last section are constructor arguments and
// are treated the same way; runtime code never loses trailing bytes.
StripResult strip_metadata(ByteView code, StripMode mode, CodeKind kind = CodeKind::runtime);

struct SolcExtraction {
    std::optional<SolcVersion> version;
    std::optional<std::string> diagnostic;  // set when a solc value is present but unusable
};

// Reads the "solc" entry: a 3-byte (major, minor, patch) string or a semver
// text string.
SolcExtraction extract_solc_version(const MetadataSection& section);

}  // namespace skelforge
