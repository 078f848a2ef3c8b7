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

#include <skelforge/metadata.hpp>

#include <algorithm>
#include <array>
#include <charconv>

#include <skelforge/cbor.hpp>

namespace skelforge {

std::string SolcVersion::to_string() const {
    return std::to_string(major) + "." + std::to_string(minor) + "." + std::to_string(patch);
}

std::optional<SolcVersion> SolcVersion::parse(std::string_view text) {
    if (!text.empty() && (text.front() == 'v' || text.front() == 'V')) text.remove_prefix(1);
    SolcVersion v;
    std::array<unsigned*, 3> parts{&v.major, &v.minor, &v.patch};
    const char* p = text.data();
    const char* last = text.data() + text.size();
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) {
            if (p == last || *p != '.') return std::nullopt;
            ++p;
        }
        const auto [next, ec] = std::from_chars(p, last, *parts[i]);
        if (ec != std::errc{} || next == p) return std::nullopt;
        p = next;
    }
    if (p != last && *p != '+' && *p != '-') return std::nullopt;
    return v;
}

namespace {

    constexpr std::array<std::string_view, 5> kKeys{"bzzr0", "bzzr1", "ipfs", "solc", "experimental"};
    constexpr std::array<std::string_view, 3> kHashKeys{"bzzr0", "bzzr1", "ipfs"};

    SolcExtraction solc_from_entries(const std::vector<cbor::MapEntry>& entries) {
        SolcExtraction out;
        const auto it = std::find_if(entries.begin(), entries.end(), [](const auto& e) { return e.key == "solc"; });
        if (it == entries.end()) return out;
        const auto& value = it->value;
        if (value.kind == cbor::Kind::byte_string) {
            if (value.bytes.size() == 3) {
                out.version = SolcVersion{value.bytes[0], value.bytes[1], value.bytes[2]};
            } else {
                out.diagnostic = "solc byte string has length " + std::to_string(value.bytes.size()) + ", expected 3";
            }
        } else if (value.kind == cbor::Kind::text_string) {
            out.version = SolcVersion::parse(value.text);
            if (!out.version) out.diagnostic = "solc text '" + value.text + "' is not a version";
        } else {
            out.diagnostic = "solc value is neither a byte string nor a text string";
        }
        return out;
    }

    // Decodes [begin, end) as a metadata map, or nullopt.
    std::optional<std::vector<cbor::MapEntry>> metadata_map(ByteView cbor_bytes) {
        // Cheap reject before decoding: must open a map (major type 5).
        if (cbor_bytes.empty() || (cbor_bytes[0] >> 5) != 5) return std::nullopt;
        auto entries = cbor::decode_text_keyed_map(cbor_bytes);
        if (!entries || entries->empty()) return std::nullopt;
        bool has_hash = false;
        for (std::size_t i = 0; i < entries->size(); ++i) {
            const auto& key = (*entries)[i].key;
            if (!is_metadata_key(key)) return std::nullopt;
            for (std::size_t j = 0; j < i; ++j) {
                if ((*entries)[j].key == key) return std::nullopt;
            }
            has_hash = has_hash || is_source_hash_key(key);
        }
        if (!has_hash) return std::nullopt;
        return entries;
    }

}  // namespace

bool is_metadata_key(std::string_view key) noexcept {
    return std::find(kKeys.begin(), kKeys.end(), key) != kKeys.end();
}

bool is_source_hash_key(std::string_view key) noexcept {
    return std::find(kHashKeys.begin(), kHashKeys.end(), key) != kHashKeys.end();
}

std::vector<MetadataSection> find_metadata(ByteView code) {
    std::vector<MetadataSection> found;
    std::size_t end = code.size();
    while (end >= 3) {
        const std::size_t length = (std::size_t{code[end - 2]} << 8) | code[end - 1];
        if (length == 0 || length + 2 > end) {
            --end;
            continue;
        }
        const std::size_t start = end - 2 - length;
        auto entries = metadata_map(code.subspan(start, length));
        if (!entries) {
            --end;
            continue;
        }

        MetadataSection section;
        section.start = start;
        section.end = end;
        section.raw.assign(code.begin() + static_cast<std::ptrdiff_t>(start),
                           code.begin() + static_cast<std::ptrdiff_t>(end));
        for (const auto& e : *entries) section.cbor_keys.push_back(e.key);
        section.solc_version = solc_from_entries(*entries).version;
        found.push_back(std::move(section));
        // Anything ending after `start` would overlap the accepted section.
        end = start;
    }
    std::reverse(found.begin(), found.end());
    return found;
}

StripResult strip_metadata(ByteView code, StripMode mode, CodeKind kind) {
    StripResult result;
    result.mode = mode;
    result.sections = find_metadata(code);

    std::size_t keep_until = code.size();
    if (kind == CodeKind::deployment && !result.sections.empty()) {
        keep_until = result.sections.back().end;
        result.constructor_arg_bytes = code.size() - keep_until;
    }

    if (mode == StripMode::zero_fill) {
        result.stripped.assign(code.begin(), code.end());
        for (const auto& s : result.sections) {
            std::fill(result.stripped.begin() + static_cast<std::ptrdiff_t>(s.start),
                      result.stripped.begin() + static_cast<std::ptrdiff_t>(s.end), 0);
        }
        std::fill(result.stripped.begin() + static_cast<std::ptrdiff_t>(keep_until), result.stripped.end(), 0);
        return result;
    }

    result.stripped.reserve(code.size());
    std::size_t pos = 0;
    for (const auto& s : result.sections) {
        result.stripped.insert(result.stripped.end(), code.begin() + static_cast<std::ptrdiff_t>(pos),
                               code.begin() + static_cast<std::ptrdiff_t>(s.start));
        pos = s.end;
    }
    result.stripped.insert(result.stripped.end(), code.begin() + static_cast<std::ptrdiff_t>(pos),
                           code.begin() + static_cast<std::ptrdiff_t>(keep_until));
    return result;
}

SolcExtraction extract_solc_version(const MetadataSection& section) {
    if (section.raw.size() < 3) return {std::nullopt, "section shorter than a map plus length field"};
    const auto entries =
        cbor::decode_text_keyed_map(ByteView{section.raw.data(), section.raw.size() - 2});
    if (!entries) return {std::nullopt, "section does not hold a CBOR map"};
    return solc_from_entries(*entries);
}

}  // namespace skelforge
