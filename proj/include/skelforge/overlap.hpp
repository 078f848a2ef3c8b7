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

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <skelforge/corpus.hpp>
#include <skelforge/findings.hpp>

namespace skelforge {

// A percentage in [0, 100], or nullopt for UNDEFINED (empty summation domain
// or zero denominator). UNDEFINED is never reported as 0 or 100.
using Percent = std::optional<double>;

// 100 * sum_s |F(t1,s) & F(t2,s)| / sum_s |F(t1,s)| over s in Swc(t1) & Swc(t2).
// Asymmetric. Throws LookupError for tools missing from the matrix.
Percent overlap(std::string_view t1, std::string_view t2, const FlaggedMatrix& matrix);

struct OverlapMatrix {
    std::vector<std::string> tools;
    std::vector<std::vector<Percent>> values;  // values[row = t1][col = t2]
};

OverlapMatrix overlap_matrix(const FlaggedMatrix& matrix);

// Square CSV, header row and first column hold tool ids; one decimal,
// empty cell for UNDEFINED.
void write_overlap_csv(std::ostream& out, const OverlapMatrix& matrix);

// Buckets: flagged by exactly 1, 2, 3, or 4+ of the included tools.
inline constexpr std::size_t kAgreementBuckets = 4;

struct AgreementRow {
    std::string tool;
    SwcClass swc_class{0};
    std::array<std::size_t, kAgreementBuckets> counts{};
    std::size_t total{0};  // |Flagged(tool, swc_class)|

    [[nodiscard]] std::optional<std::array<double, kAgreementBuckets>> shares() const;
};

// One row per included tool that covers `swc_class`, in tool order. An empty
// `tools_included` means every tool in the matrix. Throws LookupError when no
// included tool covers the class or an included tool is unknown.
std::vector<AgreementRow> agreement_breakdown(const FlaggedMatrix& matrix, SwcClass swc_class,
                                              const std::vector<std::string>& tools_included = {});

// Columns: tool,swc_class,share_1,share_2,share_3,share_4plus
void write_agreement_csv(std::ostream& out, const std::vector<AgreementRow>& rows);

// 100 * |A & B| / |A | B|. With a class, A and B are the flagged sets for
// that class and both tools must cover it; without, they are unions over the
// classes both tools cover, of which there must be at least one.
Percent jaccard(std::string_view t1, std::string_view t2, const FlaggedMatrix& matrix,
                std::optional<SwcClass> swc_class = std::nullopt);

struct JaccardBin {
    std::uint64_t index{0};
    std::size_t intersection{0};
    std::size_t union_size{0};
    std::size_t cumulative_intersection{0};  // bins 0..index
    std::size_t cumulative_union{0};

    [[nodiscard]] Percent per_bin() const noexcept;
    [[nodiscard]] Percent cumulative() const noexcept;
};

// Jaccard similarity per bin of family first blocks, plus the running
// value over all bins up to and including each one.
std::vector<JaccardBin> jaccard_timeline(std::string_view t1, std::string_view t2, const FlaggedMatrix& matrix,
                                         const FamilyIndex& families, std::optional<SwcClass> swc_class = std::nullopt,
                                         std::uint64_t bin_width = kDefaultBinWidth);

// Columns: bin_index,intersection,union,per_bin,cumulative_intersection,cumulative_union,cumulative
void write_jaccard_timeline_csv(std::ostream& out, const std::vector<JaccardBin>& bins);

struct OverlapBin {
    std::uint64_t index{0};
    std::size_t codes{0};    // families in the bin
    std::size_t flagged{0};  // ... flagged with the class by at least one included tool
    std::array<std::size_t, kAgreementBuckets> by_tool_count{};

    [[nodiscard]] Percent flagged_percent() const noexcept;
    [[nodiscard]] std::optional<std::array<double, kAgreementBuckets>> shares() const;
};

std::vector<OverlapBin> overlap_timeline(const FlaggedMatrix& matrix, const FamilyIndex& families,
                                         SwcClass swc_class, const std::vector<std::string>& tools = {},
                                         std::uint64_t bin_width = kDefaultBinWidth);

// Columns: bin_index,numerator,denominator,percentage,share_1,share_2,share_3,share_4plus
// (numerator = flagged codes, denominator = codes in the bin).
void write_overlap_timeline_csv(std::ostream& out, const std::vector<OverlapBin>& bins);

}  // namespace skelforge
