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

#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <skelforge/config.hpp>
#include <skelforge/findings.hpp>

// Command implementations behind the skelforge executable. Each returns the
// process exit code: 0 success, 1 internal failure, 2 bad input.
namespace skelforge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInput = 2;

// Reads the whole file, or stdin when `path` is empty or "-".
std::string read_input(const std::string& path);

int cmd_disasm(std::string_view hex, const Config& config, ScanMode mode, std::ostream& out, std::ostream& err);
int cmd_meta(std::string_view hex, const Config& config, std::ostream& out, std::ostream& err);
int cmd_strip(std::string_view hex, const Config& config, std::ostream& out, std::ostream& err);
int cmd_skel(std::string_view hex, const Config& config, bool emit_canonical, std::ostream& out, std::ostream& err);

// Writes families.jsonl, stats.json, ops_timeline.csv, compiler_timeline.csv
// and the corpus store (store/) into out_dir. Nothing is left behind on
// failure.
int cmd_pipeline(const std::filesystem::path& records, const std::filesystem::path& out_dir, const Config& config,
                 std::ostream& log);

struct AnalyticsOptions {
    std::vector<std::string> exclude_tools;
    std::vector<SwcClass> swc_filter;  // empty: every class
    // Tool pairs for Jaccard timelines.
    std::vector<std::pair<std::string, std::string>> jaccard_pairs;
};

// Writes overlap_matrix.csv, agreement.csv, flagged.csv, jaccard.csv,
// rates_{flagged,error,failure}.csv, timeline_SWC-<n>.csv per class and
// jaccard_<t1>_<t2>.csv per requested pair. `records` is a records file or a
// store directory written by cmd_pipeline.
int cmd_analytics(const std::filesystem::path& records, const std::filesystem::path& runs,
                  const std::filesystem::path& out_dir, const Config& config, const AnalyticsOptions& options,
                  std::ostream& log);

}  // namespace skelforge::cli
