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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <skelforge/commands.hpp>
#include <skelforge/config.hpp>
#include <skelforge/error.hpp>
#include <skelforge/findings.hpp>
#include <skelforge/overlap.hpp>
#include <skelforge/sha256.hpp>
#include <skelforge/skeleton.hpp>

#include "support/fixtures.hpp"

using namespace skelforge;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("skelforge_cli_" + tag + "_" + std::to_string(::getpid()))) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string record(const std::string& hex, std::uint64_t block) {
    return R"({"block": )" + std::to_string(block) + R"(, "code_ref": "0x)" + hex + "\"}\n";
}

}  // namespace

TEST_CASE("skel prints the digest line") {
    std::ostringstream out;
    std::ostringstream err;
    CHECK(cli::cmd_skel("0x6001600201", Config{}, false, out, err) == cli::kExitOk);
    CHECK(out.str() == sha256_hex(from_hex("606001")) +
                           R"( {"metadata_bytes":0,"push_operand_bytes":2,"trailing_zero_bytes":0,"constructor_arg_bytes":0})"
                           "\n");
    std::ostringstream canon;
    cli::cmd_skel("6001600201", Config{}, true, canon, err);
    CHECK(canon.str().find("not executable EVM): 0x606001\n") != std::string::npos);
}

TEST_CASE("bad hex exits 2 naming the offset") {
    std::ostringstream out;
    std::ostringstream err;
    CHECK(cli::cmd_skel("0x600", Config{}, false, out, err) == cli::kExitInput);
    CHECK(err.str().find("offset") != std::string::npos);
    std::ostringstream err2;
    CHECK(cli::cmd_disasm("60zz", Config{}, ScanMode::full, out, err2) == cli::kExitInput);
    CHECK(err2.str().find("2") != std::string::npos);
    CHECK(out.str().empty());
}

TEST_CASE("meta and disasm") {
    std::ostringstream out;
    std::ostringstream err;
    CHECK(cli::cmd_meta("0x6001600201", Config{}, out, err) == cli::kExitOk);
    CHECK(out.str().empty());

    auto code = from_hex("6001600201");
    const auto t = testing::metadata_trailer("ipfs", Bytes(34, 1), Bytes{0, 6, 8});
    code.insert(code.end(), t.begin(), t.end());
    std::ostringstream meta;
    cli::cmd_meta(to_hex(code), Config{}, meta, err);
    CHECK(meta.str() == R"({"start":5,"end":)" + std::to_string(code.size()) +
                            R"(,"keys":["ipfs","solc"],"solc_version":"0.6.8"})" "\n");

    std::ostringstream dis;
    CHECK(cli::cmd_disasm("0x61AA", Config{}, ScanMode::full, dis, err) == cli::kExitOk);
    CHECK(dis.str() == "0000: PUSH2 aa INCOMPLETE\n");

    std::ostringstream strip;
    cli::cmd_strip(to_hex(code), Config{}, strip, err);
    CHECK(strip.str() == "0x6001600201\n");
}

TEST_CASE("pipeline outputs") {
    TempDir tmp("pipeline");
    write(tmp.path / "same.jsonl", record("6001600201", 10) + record("6001600201", 20) + record("6001600201", 30));
    std::ostringstream log;
    REQUIRE(cli::cmd_pipeline(tmp.path / "same.jsonl", tmp.path / "out", Config{}, log) == cli::kExitOk);
    const auto families = slurp(tmp.path / "out" / "families.jsonl");
    CHECK(std::count(families.begin(), families.end(), '\n') == 1);
    const auto stats = nlohmann::json::parse(slurp(tmp.path / "out" / "stats.json"));
    CHECK(stats["deployments"] == 3);
    CHECK(stats["distinct_runtime_codes"] == 1);
    CHECK(stats["skeletons"] == 1);
    CHECK(fs::exists(tmp.path / "out" / "ops_timeline.csv"));
    CHECK(fs::exists(tmp.path / "out" / "compiler_timeline.csv"));

    // A second run over the same inputs is byte-identical.
    REQUIRE(cli::cmd_pipeline(tmp.path / "same.jsonl", tmp.path / "out2", Config{}, log) == cli::kExitOk);
    for (const auto* f : {"families.jsonl", "stats.json", "ops_timeline.csv", "compiler_timeline.csv"}) {
        CHECK(slurp(tmp.path / "out" / f) == slurp(tmp.path / "out2" / f));
    }
}

TEST_CASE("pipeline stats match the stagewise recount") {
    TempDir tmp("stats");
    testing::Rng rng(61);
    std::string text;
    std::vector<Bytes> codes;
    for (int i = 0; i < 60; ++i) {
        auto g = testing::generate_code(rng, 2 + rng() % 6, rng() % 2);
        if (!codes.empty() && rng() % 3 == 0) g.code = codes[rng() % codes.size()];
        codes.push_back(g.code);
        text += record(to_hex(g.code), rng() % 2'000'000);
    }
    write(tmp.path / "r.jsonl", text);
    std::ostringstream log;
    REQUIRE(cli::cmd_pipeline(tmp.path / "r.jsonl", tmp.path / "out", Config{}, log) == cli::kExitOk);
    const auto stats = nlohmann::json::parse(slurp(tmp.path / "out" / "stats.json"));
    std::set<Bytes> raw, meta, push, skel;
    for (const auto& c : codes) {
        raw.insert(c);
        const auto st = skeleton_stages(c);
        meta.insert(st.without_metadata);
        push.insert(st.without_push_args);
        skel.insert(st.skeleton);
    }
    CHECK(stats["distinct_runtime_codes"] == raw.size());
    CHECK(stats["without_metadata"] == meta.size());
    CHECK(stats["without_push_args"] == push.size());
    CHECK(stats["skeletons"] == skel.size());
}

TEST_CASE("pipeline failure leaves nothing behind") {
    TempDir tmp("fail");
    write(tmp.path / "bad.jsonl", record("6001", 1) + "garbage\n");
    Config strict;
    strict.strict = true;
    std::ostringstream log;
    CHECK(cli::cmd_pipeline(tmp.path / "bad.jsonl", tmp.path / "out", strict, log) == cli::kExitInput);
    CHECK_FALSE(fs::exists(tmp.path / "out"));
    CHECK(std::distance(fs::directory_iterator(tmp.path), fs::directory_iterator{}) == 1);
    CHECK(cli::cmd_pipeline(tmp.path / "missing.jsonl", tmp.path / "out", Config{}, log) == cli::kExitInput);
}

TEST_CASE("analytics on a two-tool fixture") {
    TempDir tmp("analytics");
    write(tmp.path / "r.jsonl", record("5b01", 5) + record("5b02", 6));
    const auto x = skeleton_digest(from_hex("5b01"));
    const auto y = skeleton_digest(from_hex("5b02"));
    // conkas flags both under SWC-107, osiris only y.
    std::string runs;
    runs += R"({"tool": "Conkas", "code_id": ")" + x + R"(", "findings": ["Reentrancy"]})" "\n";
    runs += R"({"tool": "Conkas", "code_id": ")" + y + R"(", "findings": ["Reentrancy"]})" "\n";
    runs += R"({"tool": "Osiris", "code_id": ")" + y + R"(", "findings": ["Reentrancy_bug"]})" "\n";
    runs += R"({"tool": "Osiris", "code_id": ")" + x + R"(", "findings": []})" "\n";
    write(tmp.path / "runs.jsonl", runs);
    std::ostringstream log;
    REQUIRE(cli::cmd_analytics(tmp.path / "r.jsonl", tmp.path / "runs.jsonl", tmp.path / "out", Config{}, {}, log) ==
            cli::kExitOk);

    // Same numbers straight from the overlap module.
    const auto matrix = build_matrix(read_runs(tmp.path / "runs.jsonl").records, SwcMappingTable::bundled());
    std::ostringstream expected;
    write_overlap_csv(expected, overlap_matrix(matrix));
    const auto csv = slurp(tmp.path / "out" / "overlap_matrix.csv");
    CHECK(csv == expected.str());
    CHECK(csv.find("conkas,100.0,50.0") != std::string::npos);
    CHECK(csv.find("osiris,100.0,100.0") != std::string::npos);

    cli::AnalyticsOptions excl;
    excl.exclude_tools = {"osiris"};
    REQUIRE(cli::cmd_analytics(tmp.path / "r.jsonl", tmp.path / "runs.jsonl", tmp.path / "ex", Config{}, excl, log) ==
            cli::kExitOk);
    CHECK(slurp(tmp.path / "ex" / "overlap_matrix.csv") == "tool,conkas\nconkas,100.0\n");

    excl.exclude_tools = {"nosuchtool"};
    CHECK(cli::cmd_analytics(tmp.path / "r.jsonl", tmp.path / "runs.jsonl", tmp.path / "bad", Config{}, excl, log) ==
          cli::kExitInput);
    CHECK_FALSE(fs::exists(tmp.path / "bad"));

    write(tmp.path / "empty.jsonl", "");
    std::ostringstream warn;
    CHECK(cli::cmd_analytics(tmp.path / "r.jsonl", tmp.path / "empty.jsonl", tmp.path / "empty", Config{}, {}, warn) ==
          cli::kExitOk);
    CHECK(warn.str().find("warning") != std::string::npos);
    CHECK(slurp(tmp.path / "empty" / "overlap_matrix.csv") == "tool\n");
}

TEST_CASE("config") {
    TempDir tmp("config");
    write(tmp.path / "c.json", R"({"bin_width": 50000, "mapping_table": "m.csv", "mode": "zero_fill", "jobs": 4,
        "version_ranges": [{"label": "old", "to": "0.5.0"}, {"label": "new", "from": "0.5.0"}]})");
    const auto c = load_config(tmp.path / "c.json");
    CHECK(c.bin_width == 50'000);
    CHECK(c.mapping_table_path == tmp.path / "m.csv");
    CHECK(c.mode == StripMode::zero_fill);
    CHECK(c.jobs == 4);
    REQUIRE(c.version_ranges.size() == 2);
    CHECK(c.version_ranges[1].from == SolcVersion{0, 5, 0});

    write(tmp.path / "bad.json", R"({"bin_width": 0})");
    CHECK_THROWS_AS(load_config(tmp.path / "bad.json").validate(), InputError);
    write(tmp.path / "algo.json", R"({"digest_algorithm": "md5"})");
    CHECK_THROWS_AS(load_config(tmp.path / "algo.json").validate(), InputError);
    write(tmp.path / "mode.json", R"({"mode": "sideways"})");
    CHECK_THROWS_AS(load_config(tmp.path / "mode.json"), InputError);
    CHECK_NOTHROW(Config{}.validate());

    ::setenv(kConfigEnvVar, (tmp.path / "c.json").c_str(), 1);
    CHECK(config_from_environment().bin_width == 50'000);
    ::unsetenv(kConfigEnvVar);
    CHECK(config_from_environment().bin_width == kDefaultBinWidth);
}
