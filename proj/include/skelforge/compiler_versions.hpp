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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <skelforge/bins.hpp>
#include <skelforge/corpus.hpp>
#include <skelforge/version.hpp>

namespace skelforge {

// Half-open version interval [from, to); a missing bound is unbounded.
struct VersionRange {
    std::string label;
    std::optional<SolcVersion> from;
    std::optional<SolcVersion> to;

    [[nodiscard]] bool contains(const SolcVersion& v) const noexcept {
        return (!from || *from <= v) && (!to || v < *to);
    }
};

// Ten ranges cut at 0.4.9, 0.4.10, 0.4.22, 0.5.0, 0.5.5, 0.5.14, 0.6.2, 0.8.0
// and 0.8.7.
std::vector<VersionRange> default_version_ranges();

// Ranges must be sorted and pairwise disjoint; throws TableError otherwise.
void validate_version_ranges(const std::vector<VersionRange>& ranges);

// Declared version if present, otherwise the version embedded in the
// last metadata section that carries one.
std::optional<SolcVersion> code_version(const CodeEntry& code);

struct CompilerBin {
    std::uint64_t index{0};
    std::size_t families{0};         // representatives in the bin
    std::size_t known{0};            // ... whose version falls into some range
    std::vector<std::size_t> counts;  // per range

    // Shares rescaled so the known versions make up 100 %; nullopt when
    // nothing in the bin has a known version.
    [[nodiscard]] std::optional<std::vector<double>> shares() const;
};

struct CompilerTimeline {
    std::uint64_t bin_width{kDefaultBinWidth};
    std::vector<VersionRange> ranges;
    std::vector<CompilerBin> bins;
};

CompilerTimeline compiler_timeline(const Corpus& corpus, const std::vector<CodeFamily>& families,
                                   const std::vector<VersionRange>& ranges,
                                   std::uint64_t bin_width = kDefaultBinWidth, unsigned jobs = 1);

// Columns: bin_index,families,known,<one column per range label>; an unknown
// bin leaves the share columns empty.
void write_compiler_timeline_csv(std::ostream& out, const CompilerTimeline& timeline);

}  // namespace skelforge
