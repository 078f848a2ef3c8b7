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

#include <skelforge/compiler_versions.hpp>

#include <skelforge/error.hpp>
#include <skelforge/metadata.hpp>
#include <skelforge/parallel.hpp>

namespace skelforge {

std::vector<VersionRange> default_version_ranges() {
    const std::vector<SolcVersion> cuts{{0, 4, 9}, {0, 4, 10}, {0, 4, 22}, {0, 5, 0}, {0, 5, 5},
                                        {0, 5, 14}, {0, 6, 2}, {0, 8, 0}, {0, 8, 7}};
    std::vector<VersionRange> ranges;
    ranges.push_back({"<" + cuts.front().to_string(), std::nullopt, cuts.front()});
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        ranges.push_back({cuts[i].to_string() + "-" + cuts[i + 1].to_string(), cuts[i], cuts[i + 1]});
    }
    ranges.push_back({">=" + cuts.back().to_string(), cuts.back(), std::nullopt});
    return ranges;
}

void validate_version_ranges(const std::vector<VersionRange>& ranges) {
    if (ranges.empty()) throw TableError("version ranges: at least one range required");
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        const auto& r = ranges[i];
        if (r.label.empty()) throw TableError("version ranges: empty label");
        if (r.from && r.to && !(*r.from < *r.to)) throw TableError("version range '" + r.label + "' is empty");
        if (i > 0) {
            const auto& prev = ranges[i - 1];
            if (!prev.to || !r.from || *r.from < *prev.to) {
                throw TableError("version ranges '" + prev.label + "' and '" + r.label + "' overlap or are unsorted");
            }
        }
    }
}

std::optional<SolcVersion> code_version(const CodeEntry& code) {
    if (code.declared_solc_version) return code.declared_solc_version;
    const auto sections = find_metadata(code.code);
    for (auto it = sections.rbegin(); it != sections.rend(); ++it) {
        if (it->solc_version) return it->solc_version;
    }
    return std::nullopt;
}

std::optional<std::vector<double>> CompilerBin::shares() const {
    if (known == 0) return std::nullopt;
    std::vector<double> out;
    out.reserve(counts.size());
    for (const auto c : counts) out.push_back(100.0 * static_cast<double>(c) / static_cast<double>(known));
    return out;
}

CompilerTimeline compiler_timeline(const Corpus& corpus, const std::vector<CodeFamily>& families,
                                   const std::vector<VersionRange>& ranges, std::uint64_t bin_width, unsigned jobs) {
    validate_version_ranges(ranges);

    std::vector<std::optional<SolcVersion>> versions(families.size());
    parallel_for(families.size(), jobs, [&](std::size_t i) {
        const auto* rep = corpus.find(families[i].representative);
        if (rep == nullptr) throw LookupError("representative " + families[i].representative + " not in corpus");
        versions[i] = code_version(*rep);
    });

    CompilerTimeline timeline;
    timeline.bin_width = bin_width;
    timeline.ranges = ranges;
    const auto last = FamilyIndex(families).last_bin(bin_width);
    if (last) {
        for (std::uint64_t b = 0; b <= *last; ++b) {
            timeline.bins.push_back(CompilerBin{b, 0, 0, std::vector<std::size_t>(ranges.size(), 0)});
        }
    }
    for (std::size_t i = 0; i < families.size(); ++i) {
        auto& bin = timeline.bins[bin_index(families[i].first_block, bin_width)];
        ++bin.families;
        if (!versions[i]) continue;
        for (std::size_t r = 0; r < ranges.size(); ++r) {
            if (ranges[r].contains(*versions[i])) {
                ++bin.counts[r];
                ++bin.known;
                break;
            }
        }
    }
    return timeline;
}

void write_compiler_timeline_csv(std::ostream& out, const CompilerTimeline& timeline) {
    out << "bin_index,families,known";
    for (const auto& r : timeline.ranges) out << ',' << r.label;
    out << '\n';
    for (const auto& bin : timeline.bins) {
        out << bin.index << ',' << bin.families << ',' << bin.known;
        const auto shares = bin.shares();
        for (std::size_t r = 0; r < timeline.ranges.size(); ++r) {
            out << ',';
            if (shares) out << format_percent((*shares)[r]);
        }
        out << '\n';
    }
}

}  // namespace skelforge
