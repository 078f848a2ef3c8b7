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

#include <skelforge/findings.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include <skelforge/embedded_tables.hpp>
#include <skelforge/error.hpp>
#include <skelforge/parallel.hpp>

namespace skelforge {

using nlohmann::json;

namespace {

    std::string_view trim(std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
        return s;
    }

    const std::set<SwcClass> kNoClasses;
    const std::set<std::string> kNoCodes;

    // Bundled table cardinalities.
    constexpr std::size_t kBundledMapped = 56;
    constexpr std::size_t kBundledClasses = 15;
    constexpr std::size_t kBundledOmitted = 7;
    constexpr std::size_t kBundledUnmapped = 9;

}  // namespace

std::string format_swc(SwcClass swc) { return "SWC-" + std::to_string(swc); }

SwcClass parse_swc(std::string_view text) {
    auto digits = trim(text);
    if (digits.size() > 4 && (digits.substr(0, 4) == "SWC-" || digits.substr(0, 4) == "swc-")) digits.remove_prefix(4);
    SwcClass value = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() || value <= 0) {
        throw InputError("not an SWC class: '" + std::string(text) + "'");
    }
    return value;
}

std::string normalize_tool_id(std::string_view tool) {
    std::string out(trim(tool));
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

const SwcMappingTable& SwcMappingTable::bundled() {
    static const SwcMappingTable table = [] {
        auto t = from_csv(embedded::kSwcMappingCsv);
        const auto c = t.counts();
        if (c.mapped != kBundledMapped || c.classes != kBundledClasses || c.omitted != kBundledOmitted ||
            c.unmapped != kBundledUnmapped) {
            throw TableError("bundled SWC mapping has " + std::to_string(c.mapped) + " mapped rows over " +
                             std::to_string(c.classes) + " classes, " + std::to_string(c.omitted) + " omitted, " +
                             std::to_string(c.unmapped) + " unmapped");
        }
        return t;
    }();
    return table;
}

SwcMappingTable SwcMappingTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open mapping table " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_csv(buffer.str());
}

SwcMappingTable SwcMappingTable::from_csv(std::string_view csv) {
    SwcMappingTable table;
    std::size_t line_no = 0;
    std::size_t start = 0;
    bool header_seen = false;
    while (start < csv.size()) {
        auto end = csv.find('\n', start);
        if (end == std::string_view::npos) end = csv.size();
        const auto line = trim(csv.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            header_seen = true;
            if (line.starts_with("tool,")) continue;
        }

        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
            throw TableError("mapping table line " + std::to_string(line_no) + ": expected 3 columns");
        }
        const auto tool = normalize_tool_id(line.substr(0, c1));
        const std::string finding(trim(line.substr(c1 + 1, c2 - c1 - 1)));
        const auto cls = trim(line.substr(c2 + 1));
        if (tool.empty() || finding.empty()) {
            throw TableError("mapping table line " + std::to_string(line_no) + ": empty tool or finding");
        }

        MappingEntry entry;
        if (cls == "OMITTED") {
            entry.kind = Classification::omitted;
        } else if (cls == "UNMAPPED") {
            entry.kind = Classification::unmapped;
        } else if (cls.starts_with("SWC-")) {
            entry.kind = Classification::swc;
            try {
                entry.swc_class = parse_swc(cls);
            } catch (const InputError&) {
                throw TableError("mapping table line " + std::to_string(line_no) + ": unknown classification '" +
                                 std::string(cls) + "'");
            }
        } else {
            throw TableError("mapping table line " + std::to_string(line_no) + ": unknown classification '" +
                             std::string(cls) + "'");
        }

        if (!table.rows_.emplace(std::make_pair(tool, finding), entry).second) {
            throw TableError("mapping table line " + std::to_string(line_no) + ": duplicate row (" + tool + ", " +
                             finding + ")");
        }
        auto& classes = table.swc_[tool];
        if (entry.kind == Classification::swc) classes.insert(entry.swc_class);
    }
    return table;
}

std::optional<MappingEntry> SwcMappingTable::lookup(std::string_view tool, std::string_view finding) const {
    const auto it = rows_.find({normalize_tool_id(tool), std::string(finding)});
    if (it == rows_.end()) return std::nullopt;
    return it->second;
}

const std::set<SwcClass>& SwcMappingTable::swc_classes(std::string_view tool) const {
    const auto it = swc_.find(normalize_tool_id(tool));
    return it == swc_.end() ? kNoClasses : it->second;
}

bool SwcMappingTable::has_tool(std::string_view tool) const { return swc_.contains(normalize_tool_id(tool)); }

std::vector<std::string> SwcMappingTable::tools() const {
    std::vector<std::string> out;
    for (const auto& [tool, _] : swc_) out.push_back(tool);
    return out;
}

SwcMappingTable::Counts SwcMappingTable::counts() const {
    Counts c;
    std::set<SwcClass> classes;
    for (const auto& [_, entry] : rows_) {
        switch (entry.kind) {
            case Classification::swc:
                ++c.mapped;
                classes.insert(entry.swc_class);
                break;
            case Classification::omitted:
                ++c.omitted;
                break;
            case Classification::unmapped:
                ++c.unmapped;
                break;
        }
    }
    c.classes = classes.size();
    return c;
}

namespace {

    std::vector<std::string> string_list(const json& j, const char* field) {
        std::vector<std::string> out;
        const auto it = j.find(field);
        if (it == j.end() || it->is_null()) return out;
        if (!it->is_array()) throw InputError(std::string("'") + field + "' is not an array");
        for (const auto& v : *it) {
            if (!v.is_string()) throw InputError(std::string("'") + field + "' holds a non-string");
            out.push_back(v.get<std::string>());
        }
        return out;
    }

    bool flag(const json& fails, const char* field) {
        const auto it = fails.find(field);
        if (it == fails.end() || it->is_null()) return false;
        if (!it->is_boolean()) throw InputError(std::string("'fails.") + field + "' is not a boolean");
        return it->get<bool>();
    }

}  // namespace

ToolRunRecord parse_run_record(std::string_view line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InputError("record is not a JSON object");

    ToolRunRecord rec;
    const auto tool = j.find("tool");
    if (tool == j.end() || !tool->is_string() || tool->get<std::string>().empty()) {
        throw InputError("missing or empty 'tool'");
    }
    rec.tool = normalize_tool_id(tool->get<std::string>());
    const auto code = j.find("code_id");
    if (code == j.end() || !code->is_string() || code->get<std::string>().empty()) {
        throw InputError("missing or empty 'code_id'");
    }
    rec.code_id = code->get<std::string>();
    std::transform(rec.code_id.begin(), rec.code_id.end(), rec.code_id.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (rec.code_id.starts_with("0x")) rec.code_id.erase(0, 2);

    rec.findings = string_list(j, "findings");
    rec.errors = string_list(j, "errors");
    rec.messages = string_list(j, "messages");

    if (const auto fails = j.find("fails"); fails != j.end() && !fails->is_null()) {
        if (!fails->is_object()) throw InputError("'fails' is not an object");
        rec.fails.timeout = flag(*fails, "timeout");
        rec.fails.oom = flag(*fails, "oom");
        rec.fails.program_issue = flag(*fails, "program_issue");
    }
    if (const auto d = j.find("duration_s"); d != j.end() && !d->is_null()) {
        if (!d->is_number()) throw InputError("'duration_s' is not a number");
        rec.duration_s = d->get<double>();
        if (!(rec.duration_s >= 0.0)) throw InputError("'duration_s' is negative");
    }
    return rec;
}

std::string to_json_line(const ToolRunRecord& record) {
    json j;
    j["tool"] = record.tool;
    j["code_id"] = record.code_id;
    j["findings"] = record.findings;
    j["errors"] = record.errors;
    j["fails"] = {{"timeout", record.fails.timeout}, {"oom", record.fails.oom},
                  {"program_issue", record.fails.program_issue}};
    j["messages"] = record.messages;
    j["duration_s"] = record.duration_s;
    return j.dump();
}

RunsResult read_runs(std::istream& in, bool strict) {
    RunsResult result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            result.records.push_back(parse_run_record(line));
        } catch (const InputError& e) {
            if (strict) throw InputError("line " + std::to_string(line_no) + ": " + e.what());
            result.issues.push_back({line_no, e.what()});
        }
    }
    return result;
}

RunsResult read_runs(const std::filesystem::path& path, bool strict) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open runs file " + path.string());
    return read_runs(in, strict);
}

ToolRunRecord LineOutputParser::parse(std::string_view tool, std::string_view code_id,
                                      std::string_view output) const {
    ToolRunRecord rec;
    rec.tool = normalize_tool_id(tool);
    rec.code_id = std::string(code_id);
    std::size_t start = 0;
    while (start < output.size()) {
        auto end = output.find('\n', start);
        if (end == std::string_view::npos) end = output.size();
        const auto line = trim(output.substr(start, end - start));
        start = end + 1;
        if (line.empty()) continue;

        const auto space = line.find(' ');
        const auto keyword = line.substr(0, space);
        const auto rest = space == std::string_view::npos ? std::string_view{} : trim(line.substr(space + 1));
        if (keyword == "FINDING" && !rest.empty()) {
            rec.findings.emplace_back(rest);
        } else if (keyword == "ERROR") {
            rec.errors.emplace_back(rest);
        } else if (keyword == "MESSAGE") {
            rec.messages.emplace_back(rest);
        } else if (keyword == "FAIL" && rest == "timeout") {
            rec.fails.timeout = true;
        } else if (keyword == "FAIL" && rest == "oom") {
            rec.fails.oom = true;
        } else if (keyword == "FAIL" && rest == "program_issue") {
            rec.fails.program_issue = true;
        } else if (keyword == "DURATION") {
            double seconds = 0.0;
            const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), seconds);
            if (ec == std::errc{} && ptr == rest.data() + rest.size() && seconds >= 0.0) {
                rec.duration_s = seconds;
            } else {
                rec.messages.emplace_back(line);
            }
        } else {
            rec.messages.emplace_back(line);
        }
    }
    return rec;
}

std::set<SwcClass> map_record(const ToolRunRecord& record, const SwcMappingTable& table, UnknownFindingPolicy policy,
                              std::vector<std::string>* warnings) {
    std::set<SwcClass> out;
    for (const auto& finding : record.findings) {
        const auto entry = table.lookup(record.tool, finding);
        if (!entry) {
            const auto msg = "unknown finding (" + record.tool + ", " + finding + ")";
            if (policy == UnknownFindingPolicy::error) throw LookupError(msg);
            if (warnings != nullptr) warnings->push_back(msg);
            continue;
        }
        if (entry->kind == Classification::swc) out.insert(entry->swc_class);
    }
    return out;
}

bool FlaggedMatrix::has_tool(std::string_view tool) const {
    return std::binary_search(tools.begin(), tools.end(), normalize_tool_id(tool));
}

const std::set<SwcClass>& FlaggedMatrix::swc_of(std::string_view tool) const {
    const auto it = swc.find(normalize_tool_id(tool));
    if (it == swc.end()) throw LookupError("unknown tool '" + std::string(tool) + "'");
    return it->second;
}

const std::set<std::string>& FlaggedMatrix::get(std::string_view tool, SwcClass swc_class) const {
    const auto t = flagged.find(normalize_tool_id(tool));
    if (t == flagged.end()) return kNoCodes;
    const auto s = t->second.find(swc_class);
    return s == t->second.end() ? kNoCodes : s->second;
}

std::set<SwcClass> FlaggedMatrix::all_classes() const {
    std::set<SwcClass> out;
    for (const auto& [_, classes] : swc) out.insert(classes.begin(), classes.end());
    return out;
}

FlaggedMatrix FlaggedMatrix::without(const std::set<std::string>& excluded) const {
    std::set<std::string> normalized;
    for (const auto& t : excluded) normalized.insert(normalize_tool_id(t));
    FlaggedMatrix out;
    for (const auto& t : tools) {
        if (normalized.contains(t)) continue;
        out.tools.push_back(t);
        out.swc[t] = swc.at(t);
        if (const auto it = flagged.find(t); it != flagged.end()) out.flagged[t] = it->second;
    }
    return out;
}

FlaggedMatrix build_matrix(const std::vector<ToolRunRecord>& records, const SwcMappingTable& table,
                           const MatrixOptions& options, std::vector<std::string>* warnings) {
    using Flags = std::map<std::string, std::map<SwcClass, std::set<std::string>>>;
    struct Partial {
        Flags flags;
        std::set<std::string> tools;
        std::vector<std::string> warnings;
    };

    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(options.jobs, records.size()));
    std::vector<Partial> partials(chunks);
    parallel_for(chunks, options.jobs, [&](std::size_t c) {
        auto& part = partials[c];
        const auto begin = records.size() * c / chunks;
        const auto end = records.size() * (c + 1) / chunks;
        for (auto i = begin; i < end; ++i) {
            const auto& rec = records[i];
            const auto tool = normalize_tool_id(rec.tool);
            std::string code_id = rec.code_id;
            if (options.families != nullptr) {
                const auto* family = options.families->find(rec.code_id);
                if (family == nullptr) {
                    part.warnings.push_back("record " + tool + "/" + rec.code_id + ": code not in corpus, skipped");
                    continue;
                }
                code_id = family->skeleton_digest;
            }
            part.tools.insert(tool);
            for (const auto swc_class : map_record(rec, table, options.unknown_findings, &part.warnings)) {
                part.flags[tool][swc_class].insert(code_id);
            }
        }
    });

    FlaggedMatrix matrix;
    std::set<std::string> tools;
    for (auto& part : partials) {
        tools.insert(part.tools.begin(), part.tools.end());
        for (auto& [tool, classes] : part.flags) {
            for (auto& [swc_class, codes] : classes) matrix.flagged[tool][swc_class].merge(codes);
        }
        if (warnings != nullptr) warnings->insert(warnings->end(), part.warnings.begin(), part.warnings.end());
    }
    matrix.tools.assign(tools.begin(), tools.end());
    for (const auto& t : matrix.tools) matrix.swc[t] = table.swc_classes(t);
    return matrix;
}

void write_matrix_csv(std::ostream& out, const FlaggedMatrix& matrix) {
    out << "tool,swc_class,code_id\n";
    for (const auto& [tool, classes] : matrix.flagged) {
        for (const auto& [swc_class, codes] : classes) {
            for (const auto& code : codes) out << tool << ',' << format_swc(swc_class) << ',' << code << '\n';
        }
    }
}

std::vector<NamedSeries> rate_timelines(const std::vector<ToolRunRecord>& records, const SwcMappingTable& table,
                                        const FamilyIndex& families, RateKind kind, std::uint64_t bin_width,
                                        std::vector<std::string>* warnings) {
    // (tool, skeleton digest) -> does the merged outcome count for `kind`
    std::map<std::string, std::map<std::string, std::pair<std::uint64_t, bool>>> outcome;
    for (const auto& rec : records) {
        const auto* family = families.find(rec.code_id);
        if (family == nullptr) {
            if (warnings != nullptr) {
                warnings->push_back("record " + rec.tool + "/" + rec.code_id + ": code not in corpus, skipped");
            }
            continue;
        }
        bool hit = false;
        switch (kind) {
            case RateKind::flagged:
                hit = std::any_of(rec.findings.begin(), rec.findings.end(), [&](const auto& f) {
                    const auto entry = table.lookup(rec.tool, f);
                    return !entry || entry->kind != Classification::omitted;
                });
                break;
            case RateKind::error:
                hit = !rec.errors.empty();
                break;
            case RateKind::failure:
                hit = rec.fails.any();
                break;
        }
        auto& slot = outcome[normalize_tool_id(rec.tool)][family->skeleton_digest];
        slot.first = family->first_block;
        slot.second = slot.second || hit;
    }

    const auto last = families.last_bin(bin_width);
    std::vector<NamedSeries> out;
    for (const auto& [tool, codes] : outcome) {
        NamedSeries named{tool, make_series(bin_width, last)};
        for (const auto& [_, value] : codes) {
            auto& bin = named.series.bins[bin_index(value.first, bin_width)];
            ++bin.denominator;
            if (value.second) ++bin.numerator;
        }
        out.push_back(std::move(named));
    }
    return out;
}

}  // namespace skelforge
