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
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <skelforge/bins.hpp>
#include <skelforge/bytes.hpp>
#include <skelforge/disasm.hpp>
#include <skelforge/version.hpp>

namespace skelforge {

inline constexpr std::uint64_t kDefaultHorizonBlock = 14'000'000;

struct Deployment {
    std::uint64_t block{0};
    std::optional<std::string> address;  // 0x + 40 hex digits, lowercase
    bool has_source{false};

    friend auto operator<=>(const Deployment&, const Deployment&) = default;
};

// One distinct runtime code and every deployment of it.
struct CodeEntry {
    std::string code_id;  // SHA-256 of the raw runtime code
    Bytes code;
    std::vector<Deployment> deployments;  // sorted
    // Version reported alongside the source, if any record carried one.
    std::optional<SolcVersion> declared_solc_version;

    [[nodiscard]] bool has_source() const noexcept;
    [[nodiscard]] std::uint64_t first_block() const noexcept;
};

class Corpus {
  public:
    [[nodiscard]] const std::vector<CodeEntry>& codes() const noexcept { return codes_; }
    [[nodiscard]] const CodeEntry* find(std::string_view code_id) const;
    [[nodiscard]] std::size_t deployment_count() const noexcept;

    // Codes are kept sorted by code_id.
    void add(std::string code_id, Bytes code, Deployment deployment, std::optional<SolcVersion> version);
    void finalize();

  private:
    std::vector<CodeEntry> codes_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct IngestOptions {
    bool strict{false};  // abort on the first malformed line
    std::uint64_t horizon_block{kDefaultHorizonBlock};
    std::filesystem::path base_dir;  // resolves relative code_ref paths
};

struct IngestIssue {
    std::size_t line{0};  // 1-based
    std::string message;
};

struct IngestResult {
    Corpus corpus;
    std::vector<IngestIssue> issues;
};

// Line-delimited JSON records:
//   {"code_id": "<sha256 hex>", "block": N, "address": "0x..", "has_source": bool,
//    "code_ref": "0x<inline hex>" | "<path>", "solc_version": "0.8.7"}
// address, code_id and solc_version are optional; a code_id that does not
// match the code's digest is an error. Malformed lines are reported and
// skipped, or abort with InputError in strict mode.
IngestResult ingest(std::istream& records, const IngestOptions& options);
IngestResult ingest(const std::filesystem::path& records_file, IngestOptions options);

// Content-addressed store: <dir>/codes/<code_id>.hex plus <dir>/index.jsonl,
// one normalized record per deployment. The index is replaced atomically.
void write_store(const Corpus& corpus, const std::filesystem::path& dir);
IngestResult load_store(const std::filesystem::path& dir, bool strict = true);

struct CodeFamily {
    std::string skeleton_digest;
    std::vector<std::string> member_code_ids;  // sorted
    std::string representative;
    std::uint64_t first_block{0};
    std::size_t deployment_count{0};
};

// Families keyed by skeleton digest, sorted by digest. The representative
// prefers a member with source, then the earliest first deployment, then the
// smallest code_id.
std::vector<CodeFamily> cluster(const Corpus& corpus, unsigned jobs = 1,
                                const OpcodeTable& table = OpcodeTable::bundled());

// Minimum deployment block over all deployments of the family's members.
std::uint64_t assign_first_block(const CodeFamily& family, const Corpus& corpus);

struct DedupStats {
    std::size_t deployments{0};
    std::size_t distinct_codes{0};
    std::size_t without_metadata{0};
    std::size_t without_push_args{0};
    std::size_t skeletons{0};

    friend bool operator==(const DedupStats&, const DedupStats&) = default;
};

// Distinct codes after each skeleton pipeline stage.
DedupStats dedup_stats(const Corpus& corpus, unsigned jobs = 1, const OpcodeTable& table = OpcodeTable::bundled());

// Resolves a code id (raw code digest or skeleton digest) to its family.
// Holds a reference to `families`, which must outlive the index.
class FamilyIndex {
  public:
    FamilyIndex(const std::vector<CodeFamily>& families);

    [[nodiscard]] const CodeFamily* find(std::string_view id) const;
    [[nodiscard]] const std::vector<CodeFamily>& families() const noexcept { return *families_; }
    // Index of the last bin holding a family, or nullopt for an empty corpus.
    [[nodiscard]] std::optional<std::uint64_t> last_bin(std::uint64_t bin_width) const noexcept;
    // Families per bin over bins 0..last_bin.
    [[nodiscard]] BinSeries family_counts(std::uint64_t bin_width) const;

  private:
    const std::vector<CodeFamily>* families_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

struct OpsSeries {
    std::string mnemonic;
    BinSeries series;
};

// Per bin of family first blocks: numerator counts families whose
// representative contains the operation, denominator counts families.
// Throws LookupError for mnemonics missing from the opcode table.
std::vector<OpsSeries> ops_timeline(const Corpus& corpus, const std::vector<CodeFamily>& families,
                                    const std::vector<std::string>& mnemonics,
                                    std::uint64_t bin_width = kDefaultBinWidth, ScanMode mode = ScanMode::full,
                                    unsigned jobs = 1, const OpcodeTable& table = OpcodeTable::bundled());

// Operations introduced by forks, in fork order.
std::vector<std::string> fork_mnemonics(const OpcodeTable& table = OpcodeTable::bundled());

}  // namespace skelforge
