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

#include <skelforge/config.hpp>

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include <skelforge/error.hpp>

namespace skelforge {

using nlohmann::json;

void Config::validate() const {
    if (bin_width == 0) throw InputError("bin_width must be positive");
    if (horizon_block == 0) throw InputError("horizon_block must be positive");
    if (jobs == 0) throw InputError("jobs must be positive");
    if (digest_algorithm != kDigestAlgorithm) {
        throw InputError("unsupported digest algorithm '" + digest_algorithm + "' (only sha256)");
    }
    try {
        validate_version_ranges(version_ranges);
    } catch (const TableError& e) {
        throw InputError(e.what());
    }
}

namespace {

    std::optional<SolcVersion> version_field(const json& j, const char* key) {
        const auto it = j.find(key);
        if (it == j.end() || it->is_null()) return std::nullopt;
        if (!it->is_string()) throw InputError(std::string("version range '") + key + "' is not a string");
        auto v = SolcVersion::parse(it->get<std::string>());
        if (!v) throw InputError("bad version '" + it->get<std::string>() + "'");
        return v;
    }

    template <typename T>
    T get(const json& j, const char* key) {
        try {
            return j.at(key).get<T>();
        } catch (const json::exception& e) {
            throw InputError(std::string("config key '") + key + "': " + e.what());
        }
    }

}  // namespace

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("config " + path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw InputError("config " + path.string() + " is not a JSON object");

    const auto base = path.parent_path();
    auto resolve = [&](const std::string& p) {
        std::filesystem::path out(p);
        return out.is_relative() ? base / out : out;
    };

    Config c;
    if (j.contains("bin_width")) c.bin_width = get<std::uint64_t>(j, "bin_width");
    if (j.contains("horizon_block")) c.horizon_block = get<std::uint64_t>(j, "horizon_block");
    if (j.contains("digest_algorithm")) c.digest_algorithm = get<std::string>(j, "digest_algorithm");
    if (j.contains("mapping_table")) c.mapping_table_path = resolve(get<std::string>(j, "mapping_table"));
    if (j.contains("opcode_table")) c.opcode_table_path = resolve(get<std::string>(j, "opcode_table"));
    if (j.contains("strict")) c.strict = get<bool>(j, "strict");
    if (j.contains("jobs")) c.jobs = get<unsigned>(j, "jobs");
    if (j.contains("mode")) {
        const auto m = get<std::string>(j, "mode");
        if (m == "remove") c.mode = StripMode::remove;
        else if (m == "zero_fill") c.mode = StripMode::zero_fill;
        else throw InputError("config mode must be remove or zero_fill");
    }
    if (j.contains("kind")) {
        const auto k = get<std::string>(j, "kind");
        if (k == "runtime") c.kind = CodeKind::runtime;
        else if (k == "deployment") c.kind = CodeKind::deployment;
        else throw InputError("config kind must be runtime or deployment");
    }
    if (j.contains("ops_scan")) {
        const auto s = get<std::string>(j, "ops_scan");
        if (s == "full") c.ops_scan = ScanMode::full;
        else if (s == "first_block") c.ops_scan = ScanMode::first_block;
        else throw InputError("config ops_scan must be full or first_block");
    }
    if (j.contains("ops")) c.ops = get<std::vector<std::string>>(j, "ops");
    if (j.contains("version_ranges")) {
        const auto& ranges = j.at("version_ranges");
        if (!ranges.is_array()) throw InputError("version_ranges is not an array");
        c.version_ranges.clear();
        for (const auto& r : ranges) {
            if (!r.is_object()) throw InputError("version range is not an object");
            c.version_ranges.push_back({get<std::string>(r, "label"), version_field(r, "from"), version_field(r, "to")});
        }
    }
    c.validate();
    return c;
}

Config config_from_environment() {
    if (const char* path = std::getenv(kConfigEnvVar); path != nullptr && *path != '\0') {
        return load_config(path);
    }
    return Config{};
}

}  // namespace skelforge
