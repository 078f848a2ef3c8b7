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

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <skelforge/commands.hpp>
#include <skelforge/error.hpp>

namespace {

using namespace skelforge;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        if (comma > start) out.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"skelforge: EVM bytecode skeletons, code families and tool-agreement analytics"};
    app.require_subcommand(1);

    Config config;
    try {
        config = config_from_environment();
    } catch (const Error& e) {
        std::cerr << "error: " << kConfigEnvVar << ": " << e.what() << '\n';
        return cli::kExitInput;
    }

    std::string mode_flag;
    std::string kind_flag;
    std::string mapping_flag;
    std::string opcode_flag;
    auto common = [&](CLI::App* cmd) {
        cmd->add_option("--opcode-table", opcode_flag, "Opcode table CSV (default: bundled)");
        cmd->add_option("--mode", mode_flag, "Metadata handling: remove | zero_fill")
            ->check(CLI::IsMember({"remove", "zero_fill"}));
        cmd->add_option("--kind", kind_flag, "Code kind: runtime | deployment")
            ->check(CLI::IsMember({"runtime", "deployment"}));
    };
    auto corpus_flags = [&](CLI::App* cmd) {
        cmd->add_option("--bin-width", config.bin_width, "Blocks per timeline bin")->check(CLI::PositiveNumber);
        cmd->add_option("--horizon", config.horizon_block, "Last block accepted on ingest")->check(CLI::PositiveNumber);
        cmd->add_option("--jobs", config.jobs, "Worker threads")->check(CLI::PositiveNumber);
        cmd->add_flag("--strict", config.strict, "Abort on the first malformed record or unknown finding");
        cmd->add_option("--opcode-table", opcode_flag, "Opcode table CSV (default: bundled)");
    };

    std::string input;
    bool first_block = false;
    auto* disasm = app.add_subcommand("disasm", "Disassemble hex bytecode");
    disasm->add_option("hexfile", input, "Hex file (stdin if omitted or '-')");
    disasm->add_flag("--first-block", first_block, "Stop at the first metadata section");
    common(disasm);

    auto* meta = app.add_subcommand("meta", "List metadata sections as JSON lines");
    meta->add_option("hexfile", input, "Hex file (stdin if omitted or '-')");

    auto* strip = app.add_subcommand("strip", "Remove or zero-fill metadata sections");
    strip->add_option("hexfile", input, "Hex file (stdin if omitted or '-')");
    common(strip);

    bool emit_canonical = false;
    auto* skel = app.add_subcommand("skel", "Print the skeleton digest and removed byte counts");
    skel->add_option("hexfile", input, "Hex file (stdin if omitted or '-')");
    skel->add_flag("--emit-canonical", emit_canonical, "Also print the canonical skeleton bytes");
    common(skel);

    std::string records;
    std::string runs;
    std::string out_dir;
    std::string ops_flag;
    std::string ops_scan;
    auto* pipeline = app.add_subcommand("pipeline", "Ingest deployments, cluster into families, write timelines");
    pipeline->add_option("records", records, "Deployment records (JSON lines)")->required();
    pipeline->add_option("out_dir", out_dir, "Output directory")->required();
    pipeline->add_option("--ops", ops_flag, "Comma-separated mnemonics for ops_timeline.csv");
    pipeline->add_option("--ops-scan", ops_scan, "full | first_block")->check(CLI::IsMember({"full", "first_block"}));
    corpus_flags(pipeline);

    std::string exclude_flag;
    std::string swc_flag;
    std::vector<std::string> jaccard_pairs;
    auto* analytics = app.add_subcommand("analytics", "Overlap, agreement and rate analytics over tool runs");
    analytics->add_option("records", records, "Deployment records file or store directory")->required();
    analytics->add_option("runs", runs, "Tool run records (JSON lines)")->required();
    analytics->add_option("out_dir", out_dir, "Output directory")->required();
    analytics->add_option("--exclude", exclude_flag, "Comma-separated tool ids to leave out");
    analytics->add_option("--swc", swc_flag, "Comma-separated SWC classes to report");
    analytics->add_option("--jaccard-pair", jaccard_pairs, "Tool pair t1:t2 for a Jaccard timeline");
    analytics->add_option("--mapping-table", mapping_flag, "Finding-to-SWC mapping CSV (default: bundled)");
    corpus_flags(analytics);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and --version come through here with a zero code.
        return app.exit(e) == 0 ? cli::kExitOk : cli::kExitInput;
    }

    if (!opcode_flag.empty()) config.opcode_table_path = opcode_flag;
    if (!mapping_flag.empty()) config.mapping_table_path = mapping_flag;
    if (!mode_flag.empty()) config.mode = mode_flag == "zero_fill" ? StripMode::zero_fill : StripMode::remove;
    if (!kind_flag.empty()) config.kind = kind_flag == "deployment" ? CodeKind::deployment : CodeKind::runtime;
    if (!ops_flag.empty()) config.ops = split_list(ops_flag);
    if (!ops_scan.empty()) config.ops_scan = ops_scan == "first_block" ? ScanMode::first_block : ScanMode::full;

    auto single = [&](auto&& command) {
        std::string text;
        try {
            text = cli::read_input(input);
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << '\n';
            return cli::kExitInput;
        }
        return command(text);
    };

    if (*disasm) {
        return single([&](const std::string& text) {
            return cli::cmd_disasm(text, config, first_block ? ScanMode::first_block : ScanMode::full, std::cout,
                                   std::cerr);
        });
    }
    if (*meta) return single([&](const std::string& text) { return cli::cmd_meta(text, config, std::cout, std::cerr); });
    if (*strip) {
        return single([&](const std::string& text) { return cli::cmd_strip(text, config, std::cout, std::cerr); });
    }
    if (*skel) {
        return single(
            [&](const std::string& text) { return cli::cmd_skel(text, config, emit_canonical, std::cout, std::cerr); });
    }
    if (*pipeline) return cli::cmd_pipeline(records, out_dir, config, std::cerr);

    cli::AnalyticsOptions options;
    options.exclude_tools = split_list(exclude_flag);
    try {
        for (const auto& s : split_list(swc_flag)) options.swc_filter.push_back(parse_swc(s));
        for (const auto& pair : jaccard_pairs) {
            const auto colon = pair.find(':');
            if (colon == std::string::npos) throw InputError("--jaccard-pair expects t1:t2, got '" + pair + "'");
            options.jaccard_pairs.emplace_back(pair.substr(0, colon), pair.substr(colon + 1));
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kExitInput;
    }
    return cli::cmd_analytics(records, runs, out_dir, config, options, std::cerr);
}
