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
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <skelforge/bins.hpp>
#include <skelforge/corpus.hpp>

namespace skelforge {

using SwcClass = int;

// "SWC-107"
std::string format_swc(SwcClass swc);
// Accepts "SWC-107", "swc-107" or "107"; throws InputError otherwise.
SwcClass parse_swc(std::string_view text);

// Tool ids are compared case-insensitively; this is the canonical form.
std::string normalize_tool_id(std::string_view tool);

enum class Classification { swc, omitted, unmapped };

struct MappingEntry {
    Classification kind{Classification::unmapped};
    SwcClass swc_class{0};  // meaningful for Classification::swc only

    friend bool operator==(const MappingEntry&, const MappingEntry&) = default;
};

// (tool, finding) -> SWC class, OMITTED or UNMAPPED.
//
// CSV format: tool,finding,classification with classification one of
// SWC-### | OMITTED | UNMAPPED.
class SwcMappingTable {
  public:
    struct Counts {
        std::size_t mapped{0};
        std::size_t omitted{0};
        std::size_t unmapped{0};
        std::size_t classes{0};
    };

    // The bundled table; its cardinalities are checked on first use.
    static const SwcMappingTable& bundled();
    static SwcMappingTable from_csv(std::string_view csv);
    static SwcMappingTable load(const std::filesystem::path& path);

    [[nodiscard]] std::optional<MappingEntry> lookup(std::string_view tool, std::string_view finding) const;
    // Classes any finding of `tool` maps to; empty for unknown tools.
    [[nodiscard]] const std::set<SwcClass>& swc_classes(std::string_view tool) const;
    [[nodiscard]] bool has_tool(std::string_view tool) const;
    [[nodiscard]] std::vector<std::string> tools() const;
    [[nodiscard]] Counts counts() const;
    [[nodiscard]] const std::map<std::pair<std::string, std::string>, MappingEntry>& rows() const noexcept {
        return rows_;
    }

  private:
    std::map<std::pair<std::string, std::string>, MappingEntry> rows_;  // (normalized tool, finding)
    std::map<std::string, std::set<SwcClass>> swc_;
};

struct FailFlags {
    bool timeout{false};
    bool oom{false};
    bool program_issue{false};

    [[nodiscard]] bool any() const noexcept { return timeout || oom || program_issue; }
    friend bool operator==(const FailFlags&, const FailFlags&) = default;
};

// Normalized output of one tool run on one code.
struct ToolRunRecord {
    std::string tool;
    std::string code_id;  // skeleton digest (a raw code digest is resolved via the corpus)
    std::vector<std::string> findings;
    std::vector<std::string> errors;
    FailFlags fails;
    std::vector<std::string> messages;
    double duration_s{0.0};

    friend bool operator==(const ToolRunRecord&, const ToolRunRecord&) = default;
};

// One JSON object per line; throws InputError on schema violations.
ToolRunRecord parse_run_record(std::string_view line);
std::string to_json_line(const ToolRunRecord& record);

struct RunsResult {
    std::vector<ToolRunRecord> records;
    std::vector<IngestIssue> issues;
};

RunsResult read_runs(std::istream& in, bool strict = false);
RunsResult read_runs(const std::filesystem::path& path, bool strict = false);

// Raw tool output -> record. Parsers for the real tools live outside this
// library; LineOutputParser is the reference format.
class OutputParser {
  public:
    virtual ~OutputParser() = default;
    [[nodiscard]] virtual ToolRunRecord parse(std::string_view tool, std::string_view code_id,
                                              std::string_view output) const = 0;
};

// Lines of the form
//   FINDING <tag> | ERROR <text> | MESSAGE <text> | FAIL timeout|oom|program_issue | DURATION <seconds>
// Any other non-empty line is kept as a message.
class LineOutputParser final : public OutputParser {
  public:
    [[nodiscard]] ToolRunRecord parse(std::string_view tool, std::string_view code_id,
                                      std::string_view output) const override;
};

enum class UnknownFindingPolicy { warn, error };

// Union of the SWC classes of the record's findings. OMITTED and UNMAPPED
// findings contribute nothing. Unknown (tool, finding) pairs either append a
// warning or throw LookupError.
std::set<SwcClass> map_record(const ToolRunRecord& record, const SwcMappingTable& table,
                              UnknownFindingPolicy policy = UnknownFindingPolicy::warn,
                              std::vector<std::string>* warnings = nullptr);

// Flagged(t, s): codes tool t flags with class s. Swc(t): classes t can
// report according to the mapping table.
struct FlaggedMatrix {
    std::vector<std::string> tools;  // sorted, normalized
    std::map<std::string, std::map<SwcClass, std::set<std::string>>> flagged;
    std::map<std::string, std::set<SwcClass>> swc;

    [[nodiscard]] bool has_tool(std::string_view tool) const;
    // Throws LookupError for tools not in the matrix.
    [[nodiscard]] const std::set<SwcClass>& swc_of(std::string_view tool) const;
    [[nodiscard]] const std::set<std::string>& get(std::string_view tool, SwcClass swc) const;
    // Classes covered by at least one tool.
    [[nodiscard]] std::set<SwcClass> all_classes() const;
    [[nodiscard]] FlaggedMatrix without(const std::set<std::string>& excluded) const;
};

struct MatrixOptions {
    UnknownFindingPolicy unknown_findings{UnknownFindingPolicy::warn};
    unsigned jobs{1};
    // When set, code ids are resolved to family skeleton digests and records
    // for codes outside the corpus are skipped with a warning.
    const FamilyIndex* families{nullptr};
};

FlaggedMatrix build_matrix(const std::vector<ToolRunRecord>& records, const SwcMappingTable& table,
                           const MatrixOptions& options = {}, std::vector<std::string>* warnings = nullptr);

// Columns: tool,swc_class,code_id
void write_matrix_csv(std::ostream& out, const FlaggedMatrix& matrix);

enum class RateKind { flagged, error, failure };

// Per tool and bin of family first blocks, among the codes the tool analyzed:
//   flagged: at least one finding that is not OMITTED
//   error:   at least one error
//   failure: any fail flag
// Records of the same (tool, code) are merged. Records for codes missing from
// the corpus are skipped with a warning.
std::vector<NamedSeries> rate_timelines(const std::vector<ToolRunRecord>& records, const SwcMappingTable& table,
                                        const FamilyIndex& families, RateKind kind,
                                        std::uint64_t bin_width = kDefaultBinWidth,
                                        std::vector<std::string>* warnings = nullptr);

}  // namespace skelforge
