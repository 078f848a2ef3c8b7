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

#include <skelforge/overlap.hpp>

#include <algorithm>
#include <map>
#include <set>

#include <skelforge/error.hpp>

namespace skelforge {

namespace {

    std::set<SwcClass> shared_classes(const FlaggedMatrix& matrix, std::string_view t1, std::string_view t2) {
        const auto& a = matrix.swc_of(t1);
        const auto& b = matrix.swc_of(t2);
        std::set<SwcClass> out;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
        return out;
    }

    std::size_t intersection_size(const std::set<std::string>& a, const std::set<std::string>& b) {
        const auto& small = a.size() <= b.size() ? a : b;
        const auto& large = a.size() <= b.size() ? b : a;
        return static_cast<std::size_t>(
            std::count_if(small.begin(), small.end(), [&](const auto& x) { return large.contains(x); }));
    }

    Percent ratio(std::size_t num, std::size_t den) {
        if (den == 0) return std::nullopt;
        return 100.0 * static_cast<double>(num) / static_cast<double>(den);
    }

    std::size_t bucket(std::size_t tool_count) { return std::min(tool_count, kAgreementBuckets) - 1; }

    std::optional<std::array<double, kAgreementBuckets>> bucket_shares(
        const std::array<std::size_t, kAgreementBuckets>& counts, std::size_t total) {
        if (total == 0) return std::nullopt;
        std::array<double, kAgreementBuckets> out{};
        for (std::size_t i = 0; i < kAgreementBuckets; ++i) {
            out[i] = 100.0 * static_cast<double>(counts[i]) / static_cast<double>(total);
        }
        return out;
    }

    std::vector<std::string> resolve_tools(const FlaggedMatrix& matrix, const std::vector<std::string>& tools) {
        if (tools.empty()) return matrix.tools;
        std::set<std::string> out;
        for (const auto& t : tools) {
            const auto id = normalize_tool_id(t);
            if (!matrix.has_tool(id)) throw LookupError("unknown tool '" + t + "'");
            out.insert(id);
        }
        return {out.begin(), out.end()};
    }

    // Codes flagged for `swc_class` by each tool, tallied by how many tools flag them.
    std::map<std::string, std::size_t> flag_counts(const FlaggedMatrix& matrix, SwcClass swc_class,
                                                   const std::vector<std::string>& tools) {
        std::map<std::string, std::size_t> counts;
        for (const auto& t : tools) {
            for (const auto& code : matrix.get(t, swc_class)) ++counts[code];
        }
        return counts;
    }

}  // namespace

Percent overlap(std::string_view t1, std::string_view t2, const FlaggedMatrix& matrix) {
    std::size_t num = 0;
    std::size_t den = 0;
    for (const auto s : shared_classes(matrix, t1, t2)) {
        const auto& f1 = matrix.get(t1, s);
        num += intersection_size(f1, matrix.get(t2, s));
        den += f1.size();
    }
    return ratio(num, den);
}

OverlapMatrix overlap_matrix(const FlaggedMatrix& matrix) {
    OverlapMatrix out;
    out.tools = matrix.tools;
    out.values.resize(out.tools.size());
    for (std::size_t r = 0; r < out.tools.size(); ++r) {
        for (const auto& col : out.tools) out.values[r].push_back(overlap(out.tools[r], col, matrix));
    }
    return out;
}

void write_overlap_csv(std::ostream& out, const OverlapMatrix& matrix) {
    out << "tool";
    for (const auto& t : matrix.tools) out << ',' << t;
    out << '\n';
    for (std::size_t r = 0; r < matrix.tools.size(); ++r) {
        out << matrix.tools[r];
        for (const auto& v : matrix.values[r]) out << ',' << format_percent(v);
        out << '\n';
    }
}

std::optional<std::array<double, kAgreementBuckets>> AgreementRow::shares() const {
    return bucket_shares(counts, total);
}

std::vector<AgreementRow> agreement_breakdown(const FlaggedMatrix& matrix, SwcClass swc_class,
                                              const std::vector<std::string>& tools_included) {
    std::vector<std::string> covering;
    for (const auto& t : resolve_tools(matrix, tools_included)) {
        if (matrix.swc_of(t).contains(swc_class)) covering.push_back(t);
    }
    if (covering.empty()) throw LookupError(format_swc(swc_class) + " is not covered by any included tool");

    const auto counts = flag_counts(matrix, swc_class, covering);
    std::vector<AgreementRow> rows;
    for (const auto& t : covering) {
        AgreementRow row{t, swc_class, {}, 0};
        for (const auto& code : matrix.get(t, swc_class)) {
            ++row.counts[bucket(counts.at(code))];
            ++row.total;
        }
        rows.push_back(row);
    }
    return rows;
}

void write_agreement_csv(std::ostream& out, const std::vector<AgreementRow>& rows) {
    out << "tool,swc_class,share_1,share_2,share_3,share_4plus\n";
    for (const auto& row : rows) {
        out << row.tool << ',' << format_swc(row.swc_class);
        const auto shares = row.shares();
        for (std::size_t i = 0; i < kAgreementBuckets; ++i) {
            out << ',';
            if (shares) out << format_percent((*shares)[i]);
        }
        out << '\n';
    }
}

namespace {

    std::pair<std::set<std::string>, std::set<std::string>> jaccard_sets(std::string_view t1, std::string_view t2,
                                                                          const FlaggedMatrix& matrix,
                                                                          std::optional<SwcClass> swc_class) {
        std::set<SwcClass> classes;
        if (swc_class) {
            if (!matrix.swc_of(t1).contains(*swc_class) || !matrix.swc_of(t2).contains(*swc_class)) {
                throw LookupError(format_swc(*swc_class) + " is not covered by both " + std::string(t1) + " and " +
                                  std::string(t2));
            }
            classes.insert(*swc_class);
        } else {
            classes = shared_classes(matrix, t1, t2);
            if (classes.empty()) {
                throw LookupError(std::string(t1) + " and " + std::string(t2) + " share no SWC class");
            }
        }
        std::set<std::string> a, b;
        for (const auto s : classes) {
            const auto& fa = matrix.get(t1, s);
            const auto& fb = matrix.get(t2, s);
            a.insert(fa.begin(), fa.end());
            b.insert(fb.begin(), fb.end());
        }
        return {std::move(a), std::move(b)};
    }

}  // namespace

Percent jaccard(std::string_view t1, std::string_view t2, const FlaggedMatrix& matrix,
                std::optional<SwcClass> swc_class) {
    const auto [a, b] = jaccard_sets(t1, t2, matrix, swc_class);
    const auto both = intersection_size(a, b);
    return ratio(both, a.size() + b.size() - both);
}

Percent JaccardBin::per_bin() const noexcept { return ratio(intersection, union_size); }
Percent JaccardBin::cumulative() const noexcept { return ratio(cumulative_intersection, cumulative_union); }

std::vector<JaccardBin> jaccard_timeline(std::string_view t1, std::string_view t2, const FlaggedMatrix& matrix,
                                         const FamilyIndex& families, std::optional<SwcClass> swc_class,
                                         std::uint64_t bin_width) {
    const auto [a, b] = jaccard_sets(t1, t2, matrix, swc_class);
    std::vector<JaccardBin> bins;
    if (const auto last = families.last_bin(bin_width)) {
        for (std::uint64_t i = 0; i <= *last; ++i) bins.push_back(JaccardBin{i});
    }
    auto place = [&](const std::string& code, bool in_both) {
        const auto* family = families.find(code);
        if (family == nullptr) return;
        auto& bin = bins[bin_index(family->first_block, bin_width)];
        ++bin.union_size;
        if (in_both) ++bin.intersection;
    };
    for (const auto& code : a) place(code, b.contains(code));
    for (const auto& code : b) {
        if (!a.contains(code)) place(code, false);
    }
    std::size_t run_i = 0, run_u = 0;
    for (auto& bin : bins) {
        run_i += bin.intersection;
        run_u += bin.union_size;
        bin.cumulative_intersection = run_i;
        bin.cumulative_union = run_u;
    }
    return bins;
}

void write_jaccard_timeline_csv(std::ostream& out, const std::vector<JaccardBin>& bins) {
    out << "bin_index,intersection,union,per_bin,cumulative_intersection,cumulative_union,cumulative\n";
    for (const auto& bin : bins) {
        out << bin.index << ',' << bin.intersection << ',' << bin.union_size << ',' << format_percent(bin.per_bin())
            << ',' << bin.cumulative_intersection << ',' << bin.cumulative_union << ','
            << format_percent(bin.cumulative()) << '\n';
    }
}

Percent OverlapBin::flagged_percent() const noexcept { return ratio(flagged, codes); }

std::optional<std::array<double, kAgreementBuckets>> OverlapBin::shares() const {
    return bucket_shares(by_tool_count, flagged);
}

std::vector<OverlapBin> overlap_timeline(const FlaggedMatrix& matrix, const FamilyIndex& families,
                                         SwcClass swc_class, const std::vector<std::string>& tools,
                                         std::uint64_t bin_width) {
    const auto counts = flag_counts(matrix, swc_class, resolve_tools(matrix, tools));
    const auto per_bin_codes = families.family_counts(bin_width);

    std::vector<OverlapBin> bins;
    for (const auto& b : per_bin_codes.bins) bins.push_back(OverlapBin{b.index, b.denominator, 0, {}});
    for (const auto& [code, n] : counts) {
        const auto* family = families.find(code);
        if (family == nullptr) continue;
        auto& bin = bins[bin_index(family->first_block, bin_width)];
        ++bin.flagged;
        ++bin.by_tool_count[bucket(n)];
    }
    return bins;
}

void write_overlap_timeline_csv(std::ostream& out, const std::vector<OverlapBin>& bins) {
    out << "bin_index,numerator,denominator,percentage,share_1,share_2,share_3,share_4plus\n";
    for (const auto& bin : bins) {
        out << bin.index << ',' << bin.flagged << ',' << bin.codes << ',' << format_percent(bin.flagged_percent());
        const auto shares = bin.shares();
        for (std::size_t i = 0; i < kAgreementBuckets; ++i) {
            out << ',';
            if (shares) out << format_percent((*shares)[i]);
        }
        out << '\n';
    }
}

}  // namespace skelforge
