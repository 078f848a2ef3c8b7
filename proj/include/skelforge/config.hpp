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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <skelforge/bins.hpp>
#include <skelforge/compiler_versions.hpp>
#include <skelforge/corpus.hpp>
#include <skelforge/disasm.hpp>
#include <skelforge/metadata.hpp>

namespace skelforge {

inline constexpr const char* kConfigEnvVar = "SKELFORGE_CONFIG";
inline constexpr const char* kDigestAlgorithm = "sha256";

struct Config {
    std::uint64_t bin_width{kDefaultBinWidth};
    std::uint64_t horizon_block{kDefaultHorizonBlock};
    std::string digest_algorithm{kDigestAlgorithm};
    std::optional<std::filesystem::path> mapping_table_path;
    std::optional<std::filesystem::path> opcode_table_path;
    bool strict{false};
    unsigned jobs{1};
    StripMode mode{StripMode::remove};
    CodeKind kind{CodeKind::runtime};
    ScanMode ops_scan{ScanMode::full};
    std::vector<VersionRange> version_ranges{default_version_ranges()};
    std::vector<std::string> ops;  // empty: fork-introduced operations

    // Throws InputError on bin_width == 0, horizon_block == 0, jobs == 0,
    // another digest algorithm, or invalid version ranges.
    void validate() const;
};

// JSON object with any of: bin_width, horizon_block, digest_algorithm,
// mapping_table, opcode_table, strict, jobs, mode, kind, ops_scan, ops,
// version_ranges ([{"label", "from", "to"}]). Relative paths resolve against
// the config file's directory.
Config load_config(const std::filesystem::path& path);

// Defaults, overlaid with $SKELFORGE_CONFIG when set.
Config config_from_environment();

}  // namespace skelforge
