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

#include <skelforge/corpus.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include <skelforge/error.hpp>
#include <skelforge/metadata.hpp>
#include <skelforge/parallel.hpp>
#include <skelforge/sha256.hpp>
#include <skelforge/skeleton.hpp>

namespace skelforge {

using nlohmann::json;

bool CodeEntry::has_source() const noexcept {
    return std::any_of(deployments.begin(), deployments.end(), [](const auto& d) { return d.has_source; });
}

std::uint64_t CodeEntry::first_block() const noexcept {
    std::uint64_t first = UINT64_MAX;
    for (const auto& d : deployments) first = std::min(first, d.block);
    return first;
}

const CodeEntry* Corpus::find(std::string_view code_id) const {
    const auto it = index_.find(std::string(code_id));
    return it == index_.end() ? nullptr : &codes_[it->second];
}

std::size_t Corpus::deployment_count() const noexcept {
    std::size_t n = 0;
    for (const auto& c : codes_) n += c.deployments.size();
    return n;
}

void Corpus::add(std::string code_id, Bytes code, Deployment deployment, std::optional<SolcVersion> version) {
    auto [it, inserted] = index_.try_emplace(code_id, codes_.size());
    if (inserted) {
        codes_.push_back(CodeEntry{std::move(code_id), std::move(code), {}, std::nullopt});
    }
    auto& entry = codes_[it->second];
    entry.deployments.push_back(std::move(deployment));
    if (version && !entry.declared_solc_version) entry.declared_solc_version = version;
}

void Corpus::finalize() {
    std::sort(codes_.begin(), codes_.end(), [](const auto& a, const auto& b) { return a.code_id < b.code_id; });
    index_.clear();
    for (std::size_t i = 0; i < codes_.size(); ++i) {
        std::sort(codes_[i].deployments.begin(), codes_[i].deployments.end());
        index_.emplace(codes_[i].code_id, i);
    }
}

namespace {

    bool is_lower_hex(std::string_view s) {
        return std::all_of(s.begin(), s.end(), [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
    }

    std::string lowercase(std::string s) {
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return s;
    }

    Bytes read_code_ref(const std::string& ref, const std::filesystem::path& base_dir) {
        if (ref.starts_with("0x") || ref.starts_with("0X")) return from_hex(ref);
        std::filesystem::path path(ref);
        if (path.is_relative()) path = base_dir / path;
        std::ifstream in(path);
        if (!in) {
            // Bare hex without a prefix is accepted when no such file exists.
            if (!ref.empty() && is_lower_hex(lowercase(ref))) return from_hex(ref);
            throw InputError("cannot read code_ref '" + ref + "'");
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        try {
            return from_hex(buffer.str());
        } catch (const HexError& e) {
            throw InputError("code file " + path.string() + ": " + e.what());
        }
    }

    struct ParsedRecord {
        std::string code_id;
        Bytes code;
        Deployment deployment;
        std::optional<SolcVersion> version;
    };

    ParsedRecord parse_record(const std::string& line, const IngestOptions& options) {
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw InputError(std::string("invalid JSON: ") + e.what());
        }
        if (!j.is_object()) throw InputError("record is not a JSON object");

        ParsedRecord rec;
        const auto block = j.find("block");
        if (block == j.end() || !block->is_number_unsigned()) {
            throw InputError("missing or non-integer 'block'");
        }
        rec.deployment.block = block->get<std::uint64_t>();
        if (rec.deployment.block > options.horizon_block) {
            throw InputError("block " + std::to_string(rec.deployment.block) + " beyond horizon " +
                             std::to_string(options.horizon_block));
        }

        const auto ref = j.find("code_ref");
        if (ref == j.end() || !ref->is_string()) throw InputError("missing 'code_ref'");
        try {
            rec.code = read_code_ref(ref->get<std::string>(), options.base_dir);
        } catch (const HexError& e) {
            throw InputError(std::string("code_ref: ") + e.what());
        }
        rec.code_id = sha256_hex(rec.code);

        if (const auto id = j.find("code_id"); id != j.end() && !id->is_null()) {
            if (!id->is_string()) throw InputError("'code_id' is not a string");
            auto given = lowercase(id->get<std::string>());
            if (given.starts_with("0x")) given.erase(0, 2);
            if (given != rec.code_id) {
                throw InputError("code_id " + given + " does not match code digest " + rec.code_id);
            }
        }

        if (const auto src = j.find("has_source"); src != j.end()) {
            if (!src->is_boolean()) throw InputError("'has_source' is not a boolean");
            rec.deployment.has_source = src->get<bool>();
        }

        if (const auto addr = j.find("address"); addr != j.end() && !addr->is_null()) {
            if (!addr->is_string()) throw InputError("'address' is not a string");
            auto a = lowercase(addr->get<std::string>());
            if (a.starts_with("0x")) a.erase(0, 2);
            if (a.size() != 40 || !is_lower_hex(a)) throw InputError("'address' is not 20 bytes of hex");
            rec.deployment.address = "0x" + a;
        }

        if (const auto ver = j.find("solc_version"); ver != j.end() && !ver->is_null()) {
            if (!ver->is_string()) throw InputError("'solc_version' is not a string");
            rec.version = SolcVersion::parse(ver->get<std::string>());
            if (!rec.version) throw InputError("'solc_version' is not a version");
        }
        return rec;
    }

}  // namespace

IngestResult ingest(std::istream& records, const IngestOptions& options) {
    IngestResult result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(records, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            auto rec = parse_record(line, options);
            result.corpus.add(std::move(rec.code_id), std::move(rec.code), std::move(rec.deployment), rec.version);
        } catch (const InputError& e) {
            if (options.strict) throw InputError("line " + std::to_string(line_no) + ": " + e.what());
            result.issues.push_back({line_no, e.what()});
        }
    }
    result.corpus.finalize();
    return result;
}

IngestResult ingest(const std::filesystem::path& records_file, IngestOptions options) {
    std::ifstream in(records_file);
    if (!in) throw InputError("cannot open records file " + records_file.string());
    if (options.base_dir.empty()) options.base_dir = records_file.parent_path();
    return ingest(in, options);
}

void write_store(const Corpus& corpus, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "codes");
    for (const auto& c : corpus.codes()) {
        const auto path = dir / "codes" / (c.code_id + ".hex");
        if (fs::exists(path)) continue;  // content-addressed: same name, same bytes
        const auto tmp = fs::path(path.string() + ".tmp");
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << "0x" << to_hex(c.code) << '\n';
            if (!out) throw Error("cannot write " + tmp.string());
        }
        fs::rename(tmp, path);
    }

    const auto index = dir / "index.jsonl";
    const auto tmp = dir / "index.jsonl.tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        for (const auto& c : corpus.codes()) {
            for (const auto& d : c.deployments) {
                json j;
                j["code_id"] = c.code_id;
                j["block"] = d.block;
                if (d.address) j["address"] = *d.address;
                j["has_source"] = d.has_source;
                j["code_ref"] = "codes/" + c.code_id + ".hex";
                if (c.declared_solc_version) j["solc_version"] = c.declared_solc_version->to_string();
                out << j.dump() << '\n';
            }
        }
        if (!out) throw Error("cannot write " + tmp.string());
    }
    fs::rename(tmp, index);
}

IngestResult load_store(const std::filesystem::path& dir, bool strict) {
    IngestOptions options;
    options.strict = strict;
    options.horizon_block = UINT64_MAX;
    options.base_dir = dir;
    return ingest(dir / "index.jsonl", options);
}

std::vector<CodeFamily> cluster(const Corpus& corpus, unsigned jobs, const OpcodeTable& table) {
    const auto& codes = corpus.codes();
    std::vector<std::string> digests(codes.size());
    parallel_for(codes.size(), jobs, [&](std::size_t i) { digests[i] = skeleton_digest(codes[i].code, CodeKind::runtime, table); });

    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < codes.size(); ++i) groups[digests[i]].push_back(i);

    std::vector<CodeFamily> families;
    families.reserve(groups.size());
    for (auto& [digest, members] : groups) {
        CodeFamily family;
        family.skeleton_digest = digest;
        family.first_block = UINT64_MAX;
        const CodeEntry* best = nullptr;
        auto rank = [](const CodeEntry& c) {
            return std::make_tuple(!c.has_source(), c.first_block(), std::string_view{c.code_id});
        };
        for (const auto i : members) {
            const auto& c = codes[i];
            family.member_code_ids.push_back(c.code_id);
            family.first_block = std::min(family.first_block, c.first_block());
            family.deployment_count += c.deployments.size();
            if (best == nullptr || rank(c) < rank(*best)) best = &c;
        }
        family.representative = best->code_id;
        // codes are sorted by id, so members already are
        families.push_back(std::move(family));
    }
    return families;
}

std::uint64_t assign_first_block(const CodeFamily& family, const Corpus& corpus) {
    std::uint64_t first = UINT64_MAX;
    for (const auto& id : family.member_code_ids) {
        const auto* code = corpus.find(id);
        if (code == nullptr) throw LookupError("family member " + id + " not in corpus");
        first = std::min(first, code->first_block());
    }
    return first;
}

DedupStats dedup_stats(const Corpus& corpus, unsigned jobs, const OpcodeTable& table) {
    const auto& codes = corpus.codes();
    struct StageDigests {
        std::string metadata, push, skeleton;
    };
    std::vector<StageDigests> stage(codes.size());
    parallel_for(codes.size(), jobs, [&](std::size_t i) {
        const auto s = skeleton_stages(codes[i].code, CodeKind::runtime, table);
        stage[i] = {sha256_hex(s.without_metadata), sha256_hex(s.without_push_args), sha256_hex(s.skeleton)};
    });

    std::set<std::string> metadata, push, skeleton;
    for (const auto& s : stage) {
        metadata.insert(s.metadata);
        push.insert(s.push);
        skeleton.insert(s.skeleton);
    }
    return DedupStats{corpus.deployment_count(), codes.size(), metadata.size(), push.size(), skeleton.size()};
}

FamilyIndex::FamilyIndex(const std::vector<CodeFamily>& families) : families_(&families) {
    // Skeleton digests take precedence over raw code ids on collision.
    for (std::size_t i = 0; i < families.size(); ++i) {
        for (const auto& id : families[i].member_code_ids) by_id_.emplace(id, i);
    }
    for (std::size_t i = 0; i < families.size(); ++i) by_id_.insert_or_assign(families[i].skeleton_digest, i);
}

const CodeFamily* FamilyIndex::find(std::string_view id) const {
    const auto it = by_id_.find(std::string(id));
    return it == by_id_.end() ? nullptr : &(*families_)[it->second];
}

std::optional<std::uint64_t> FamilyIndex::last_bin(std::uint64_t bin_width) const noexcept {
    std::optional<std::uint64_t> last;
    for (const auto& f : *families_) {
        const auto b = bin_index(f.first_block, bin_width);
        if (!last || b > *last) last = b;
    }
    return last;
}

BinSeries FamilyIndex::family_counts(std::uint64_t bin_width) const {
    auto series = make_series(bin_width, last_bin(bin_width));
    for (const auto& f : *families_) {
        auto& bin = series.bins[bin_index(f.first_block, bin_width)];
        ++bin.numerator;
        ++bin.denominator;
    }
    return series;
}

std::vector<OpsSeries> ops_timeline(const Corpus& corpus, const std::vector<CodeFamily>& families,
                                    const std::vector<std::string>& mnemonics, std::uint64_t bin_width, ScanMode mode,
                                    unsigned jobs, const OpcodeTable& table) {
    for (const auto& m : mnemonics) (void)table.by_mnemonic(m);

    std::vector<std::set<std::string>> present(families.size());
    parallel_for(families.size(), jobs, [&](std::size_t i) {
        const auto* rep = corpus.find(families[i].representative);
        if (rep == nullptr) throw LookupError("representative " + families[i].representative + " not in corpus");
        if (mode == ScanMode::full) {
            present[i] = ops_present(rep->code, table);
            return;
        }
        std::vector<std::size_t> boundaries;
        for (const auto& s : find_metadata(rep->code)) boundaries.push_back(s.start);
        for (const auto& ins : disassemble(rep->code, ScanMode::first_block, boundaries, table).instructions) {
            if (!ins.is_invalid()) present[i].insert(std::string(ins.mnemonic()));
        }
    });

    const FamilyIndex index(families);
    const auto last = index.last_bin(bin_width);
    std::vector<OpsSeries> out;
    out.reserve(mnemonics.size());
    for (const auto& m : mnemonics) {
        OpsSeries ops{m, make_series(bin_width, last)};
        for (std::size_t i = 0; i < families.size(); ++i) {
            auto& bin = ops.series.bins[bin_index(families[i].first_block, bin_width)];
            ++bin.denominator;
            if (present[i].contains(m)) ++bin.numerator;
        }
        out.push_back(std::move(ops));
    }
    return out;
}

std::vector<std::string> fork_mnemonics(const OpcodeTable& table) {
    std::vector<const OpcodeSpec*> forked;
    for (const auto& spec : table.specs()) {
        if (spec.introduced_at_block) forked.push_back(&spec);
    }
    std::stable_sort(forked.begin(), forked.end(), [](const auto* a, const auto* b) {
        return *a->introduced_at_block < *b->introduced_at_block;
    });
    std::vector<std::string> out;
    for (const auto* spec : forked) out.push_back(spec->mnemonic);
    return out;
}

}  // namespace skelforge
