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

#include <skelforge/commands.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <unistd.h>

#include <json.hpp>

#include <skelforge/compiler_versions.hpp>
#include <skelforge/error.hpp>
#include <skelforge/overlap.hpp>
#include <skelforge/skeleton.hpp>

namespace skelforge::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

    OpcodeTable opcode_table(const Config& config) {
        return config.opcode_table_path ? OpcodeTable::load(*config.opcode_table_path) : OpcodeTable::bundled();
    }

    SwcMappingTable mapping_table(const Config& config) {
        return config.mapping_table_path ? SwcMappingTable::load(*config.mapping_table_path)
                                         : SwcMappingTable::bundled();
    }

    // Runs `body`, mapping exceptions to exit codes.
    template <typename Body>
    int guarded(std::ostream& err, Body&& body) {
        try {
            return body();
        } catch (const InputError& e) {
            err << "error: " << e.what() << '\n';
            return kExitInput;
        } catch (const LookupError& e) {
            err << "error: " << e.what() << '\n';
            return kExitInput;
        } catch (const TableError& e) {
            err << "error: " << e.what() << '\n';
            return kExitInput;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            return kExitFailure;
        }
    }

    ordered_json removed_json(const RemovedCounts& r) {
        ordered_json j;
        j["metadata_bytes"] = r.metadata_bytes;
        j["push_operand_bytes"] = r.push_operand_bytes;
        j["trailing_zero_bytes"] = r.trailing_zero_bytes;
        j["constructor_arg_bytes"] = r.constructor_arg_bytes;
        return j;
    }

    void write_file(const fs::path& path, const std::string& content) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << content;
        if (!out) throw Error("cannot write " + path.string());
    }

    // Output files are assembled in a staging directory and moved into place
    // only when every one of them was written.
    class Staging {
      public:
        explicit Staging(const fs::path& out_dir) : out_dir_(out_dir) {
            fs::create_directories(out_dir_);
            dir_ = out_dir_ / (".staging-" + std::to_string(::getpid()));
            fs::remove_all(dir_);
            fs::create_directories(dir_);
        }
        ~Staging() {
            std::error_code ec;
            fs::remove_all(dir_, ec);
        }
        Staging(const Staging&) = delete;
        Staging& operator=(const Staging&) = delete;

        [[nodiscard]] fs::path path(const std::string& name) const { return dir_ / name; }

        void commit() {
            for (const auto& entry : fs::directory_iterator(dir_)) {
                const auto target = out_dir_ / entry.path().filename();
                fs::remove_all(target);
                fs::rename(entry.path(), target);
            }
        }

      private:
        fs::path out_dir_;
        fs::path dir_;
    };

    IngestResult load_corpus(const fs::path& records, const Config& config, std::ostream& log) {
        IngestResult result;
        if (fs::is_directory(records)) {
            result = load_store(records, config.strict);
        } else {
            IngestOptions options;
            options.strict = config.strict;
            options.horizon_block = config.horizon_block;
            result = ingest(records, options);
        }
        for (const auto& issue : result.issues) {
            log << "warning: " << records.string() << ":" << issue.line << ": " << issue.message << '\n';
        }
        return result;
    }

}  // namespace

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int cmd_disasm(std::string_view hex, const Config& config, ScanMode mode, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto code = from_hex(hex);
        const auto table = opcode_table(config);
        std::vector<std::size_t> boundaries;
        if (mode == ScanMode::first_block) {
            for (const auto& s : find_metadata(code)) boundaries.push_back(s.start);
        }
        out << format_listing(disassemble(code, mode, boundaries, table));
        return kExitOk;
    });
}

int cmd_meta(std::string_view hex, const Config&, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto code = from_hex(hex);
        for (const auto& section : find_metadata(code)) {
            ordered_json j;
            j["start"] = section.start;
            j["end"] = section.end;
            j["keys"] = section.cbor_keys;
            const auto solc = extract_solc_version(section);
            j["solc_version"] = solc.version ? ordered_json(solc.version->to_string()) : ordered_json(nullptr);
            out << j.dump() << '\n';
            if (solc.diagnostic) err << "warning: section at " << section.start << ": " << *solc.diagnostic << '\n';
        }
        return kExitOk;
    });
}

int cmd_strip(std::string_view hex, const Config& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto code = from_hex(hex);
        out << "0x" << to_hex(strip_metadata(code, config.mode, config.kind).stripped) << '\n';
        return kExitOk;
    });
}

int cmd_skel(std::string_view hex, const Config& config, bool emit_canonical, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto code = from_hex(hex);
        const auto table = opcode_table(config);
        if (config.mode == StripMode::zero_fill) {
            // Experiment variant: metadata zeroed in place before the usual pipeline.
            code = strip_metadata(code, StripMode::zero_fill, config.kind).stripped;
        }
        const auto skeleton = skeletonize(code, config.kind, table);
        out << skeleton.digest << ' ' << removed_json(skeleton.removed).dump() << '\n';
        if (emit_canonical) {
            out << "canonical (equivalence key, not executable EVM): 0x" << to_hex(skeleton.canonical_bytes) << '\n';
        }
        return kExitOk;
    });
}

int cmd_pipeline(const fs::path& records, const fs::path& out_dir, const Config& config, std::ostream& log) {
    return guarded(log, [&] {
        config.validate();
        const auto table = opcode_table(config);
        const auto ops = config.ops.empty() ? fork_mnemonics(table) : config.ops;
        for (const auto& m : ops) (void)table.by_mnemonic(m);

        const auto ingested = load_corpus(records, config, log);
        const auto& corpus = ingested.corpus;
        const auto families = cluster(corpus, config.jobs, table);
        const auto stats = dedup_stats(corpus, config.jobs, table);

        Staging staging(out_dir);
        write_store(corpus, staging.path("store"));

        std::ostringstream fam;
        for (const auto& f : families) {
            ordered_json j;
            j["skeleton_digest"] = f.skeleton_digest;
            j["representative"] = f.representative;
            j["members"] = f.member_code_ids;
            j["first_block"] = f.first_block;
            j["deployment_count"] = f.deployment_count;
            fam << j.dump() << '\n';
        }
        write_file(staging.path("families.jsonl"), fam.str());

        ordered_json s;
        s["deployments"] = stats.deployments;
        s["distinct_runtime_codes"] = stats.distinct_codes;
        s["without_metadata"] = stats.without_metadata;
        s["without_push_args"] = stats.without_push_args;
        s["skeletons"] = stats.skeletons;
        write_file(staging.path("stats.json"), s.dump(2) + "\n");

        std::vector<NamedSeries> ops_series;
        for (auto& o : ops_timeline(corpus, families, ops, config.bin_width, config.ops_scan, config.jobs, table)) {
            ops_series.push_back({std::move(o.mnemonic), std::move(o.series)});
        }
        std::ostringstream ops_csv;
        write_series_csv(ops_csv, ops_series);
        write_file(staging.path("ops_timeline.csv"), ops_csv.str());

        std::ostringstream compilers;
        write_compiler_timeline_csv(compilers,
                                    compiler_timeline(corpus, families, config.version_ranges, config.bin_width, config.jobs));
        write_file(staging.path("compiler_timeline.csv"), compilers.str());

        staging.commit();
        log << "pipeline: " << stats.deployments << " deployments, " << stats.distinct_codes << " codes, "
            << families.size() << " families\n";
        return kExitOk;
    });
}

int cmd_analytics(const fs::path& records, const fs::path& runs, const fs::path& out_dir, const Config& config,
                  const AnalyticsOptions& options, std::ostream& log) {
    return guarded(log, [&] {
        config.validate();
        const auto table = opcode_table(config);
        const auto mapping = mapping_table(config);

        const auto ingested = load_corpus(records, config, log);
        const auto families = cluster(ingested.corpus, config.jobs, table);
        const FamilyIndex index(families);

        const auto run_result = read_runs(runs, config.strict);
        for (const auto& issue : run_result.issues) {
            log << "warning: " << runs.string() << ":" << issue.line << ": " << issue.message << '\n';
        }
        if (run_result.records.empty()) log << "warning: no tool runs in " << runs.string() << '\n';

        std::vector<std::string> warnings;
        MatrixOptions mopts;
        mopts.unknown_findings = config.strict ? UnknownFindingPolicy::error : UnknownFindingPolicy::warn;
        mopts.jobs = config.jobs;
        mopts.families = &index;
        const auto full = build_matrix(run_result.records, mapping, mopts, &warnings);

        std::set<std::string> excluded;
        for (const auto& t : options.exclude_tools) {
            const auto id = normalize_tool_id(t);
            if (!mapping.has_tool(id) && !full.has_tool(id)) throw InputError("unknown tool id '" + t + "' in --exclude");
            excluded.insert(id);
        }
        const auto matrix = full.without(excluded);

        std::vector<SwcClass> classes;
        if (options.swc_filter.empty()) {
            const auto all = matrix.all_classes();
            classes.assign(all.begin(), all.end());
        } else {
            classes = options.swc_filter;
        }

        Staging staging(out_dir);

        std::ostringstream overlap_csv;
        write_overlap_csv(overlap_csv, overlap_matrix(matrix));
        write_file(staging.path("overlap_matrix.csv"), overlap_csv.str());

        std::ostringstream flagged_csv;
        write_matrix_csv(flagged_csv, matrix);
        write_file(staging.path("flagged.csv"), flagged_csv.str());

        // Breakdown rows for classes at least two included tools address.
        std::vector<AgreementRow> agreement;
        for (const auto s : classes) {
            std::size_t covering = 0;
            for (const auto& t : matrix.tools) covering += matrix.swc_of(t).contains(s) ? 1 : 0;
            if (covering < 2) continue;
            auto rows = agreement_breakdown(matrix, s);
            agreement.insert(agreement.end(), rows.begin(), rows.end());
        }
        std::ostringstream agreement_csv;
        write_agreement_csv(agreement_csv, agreement);
        write_file(staging.path("agreement.csv"), agreement_csv.str());

        std::ostringstream jaccard_csv;
        jaccard_csv << "tool_1,tool_2,swc_class,jaccard\n";
        for (std::size_t i = 0; i < matrix.tools.size(); ++i) {
            for (std::size_t k = i + 1; k < matrix.tools.size(); ++k) {
                const auto& a = matrix.tools[i];
                const auto& b = matrix.tools[k];
                for (const auto s : classes) {
                    if (matrix.swc_of(a).contains(s) && matrix.swc_of(b).contains(s)) {
                        jaccard_csv << a << ',' << b << ',' << format_swc(s) << ','
                                    << format_percent(jaccard(a, b, matrix, s)) << '\n';
                    }
                }
            }
        }
        write_file(staging.path("jaccard.csv"), jaccard_csv.str());

        for (const auto& [a, b] : options.jaccard_pairs) {
            std::ostringstream csv;
            write_jaccard_timeline_csv(csv, jaccard_timeline(a, b, matrix, index, std::nullopt, config.bin_width));
            write_file(staging.path("jaccard_" + normalize_tool_id(a) + "_" + normalize_tool_id(b) + ".csv"), csv.str());
        }

        const std::vector<std::pair<RateKind, const char*>> kinds{
            {RateKind::flagged, "rates_flagged.csv"}, {RateKind::error, "rates_error.csv"},
            {RateKind::failure, "rates_failure.csv"}};
        std::vector<ToolRunRecord> included_runs;
        for (const auto& r : run_result.records) {
            if (!excluded.contains(normalize_tool_id(r.tool))) included_runs.push_back(r);
        }
        for (const auto& [kind, name] : kinds) {
            std::ostringstream csv;
            // Skipped-record warnings were already collected by build_matrix.
            write_series_csv(csv, rate_timelines(included_runs, mapping, index, kind, config.bin_width));
            write_file(staging.path(name), csv.str());
        }

        for (const auto s : classes) {
            std::ostringstream csv;
            write_overlap_timeline_csv(csv, overlap_timeline(matrix, index, s, {}, config.bin_width));
            write_file(staging.path("timeline_" + format_swc(s) + ".csv"), csv.str());
        }

        staging.commit();
        for (const auto& w : warnings) log << "warning: " << w << '\n';
        log << "analytics: " << run_result.records.size() << " runs, " << matrix.tools.size() << " tools\n";
        return kExitOk;
    });
}

}  // namespace skelforge::cli
