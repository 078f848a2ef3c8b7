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

// Writes the small synthetic corpus under data/demo: deployment records with
// inline code and tool-run records keyed by skeleton digest. Fixed seed, so
// the output is reproducible.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include <skelforge/findings.hpp>
#include <skelforge/opcodes.hpp>
#include <skelforge/skeleton.hpp>

namespace {

using namespace skelforge;
using nlohmann::ordered_json;
using Rng = std::mt19937_64;

constexpr std::uint64_t kSpan = 14'000'000;

Bytes cbor_trailer(Rng& rng, std::uint64_t block) {
    // Older compilers wrote bzzr0 without a version; newer ones ipfs + solc.
    ordered_json map = ordered_json::object();
    Bytes hash(block < 9'000'000 ? 32 : 34);
    for (auto& b : hash) b = static_cast<std::uint8_t>(rng());
    if (block < 6'000'000) {
        map["bzzr0"] = ordered_json::binary(hash);
    } else if (block < 9'000'000) {
        map["bzzr1"] = ordered_json::binary(hash);
        map["solc"] = ordered_json::binary(Bytes{0, 5, static_cast<std::uint8_t>(rng() % 17)});
    } else {
        map["ipfs"] = ordered_json::binary(hash);
        const std::uint8_t minor = block < 11'500'000 ? 6 : 8;
        map["solc"] = ordered_json::binary(Bytes{0, minor, static_cast<std::uint8_t>(rng() % 12)});
    }
    auto out = ordered_json::to_cbor(map);
    const auto n = out.size();
    out.push_back(static_cast<std::uint8_t>(n >> 8));
    out.push_back(static_cast<std::uint8_t>(n));
    return out;
}

Bytes body(Rng& rng, std::uint64_t block, const OpcodeTable& table) {
    std::vector<const OpcodeSpec*> ops;
    for (const auto& s : table.specs()) {
        if (s.byte_value != 0 && (!s.introduced_at_block || *s.introduced_at_block <= block)) ops.push_back(&s);
    }
    Bytes code{0x60, 0x80, 0x60, 0x40, 0x52};
    const auto n = 20 + rng() % 120;
    for (std::size_t i = 0; i < n; ++i) {
        const auto* s = ops[rng() % ops.size()];
        code.push_back(s->byte_value);
        for (std::size_t k = 0; k < s->operand_width; ++k) code.push_back(static_cast<std::uint8_t>(rng()));
    }
    code.push_back(0xfd);  // REVERT keeps the body from ending in 0x00
    return code;
}

// Rewrites every PUSH operand, keeping the opcode layout.
Bytes vary_constants(Rng& rng, Bytes code, std::size_t body_size, const OpcodeTable& table) {
    for (std::size_t pc = 0; pc < body_size;) {
        const auto* s = table.at(code[pc]);
        const std::size_t w = s ? s->operand_width : 0;
        for (std::size_t k = 1; k <= w && pc + k < body_size; ++k) code[pc + k] = static_cast<std::uint8_t>(rng());
        pc += 1 + w;
    }
    return code;
}

std::string hex_address(Rng& rng) {
    Bytes a(20);
    for (auto& b : a) b = static_cast<std::uint8_t>(rng());
    return "0x" + to_hex(a);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_demo <out_dir>\n";
        return 2;
    }
    const std::string dir = argv[1];
    Rng rng(20220101);
    const auto& table = OpcodeTable::bundled();
    const auto& mapping = SwcMappingTable::bundled();

    std::ofstream records(dir + "/records.jsonl");
    std::map<std::string, std::uint64_t> skeletons;  // digest -> first block
    const std::size_t families = 120;
    for (std::size_t f = 0; f < families; ++f) {
        const auto base_block = (kSpan * f) / families + rng() % 200'000;
        const auto b = body(rng, base_block, table);
        const auto variants = 1 + rng() % 3;
        for (std::size_t v = 0; v < variants; ++v) {
            // Some variants differ from the first only in their metadata.
            auto code = v == 0 || rng() % 3 == 0 ? b : vary_constants(rng, b, b.size(), table);
            const auto block0 = std::min<std::uint64_t>(base_block + v * (rng() % 400'000), kSpan - 1);
            const auto trailer = cbor_trailer(rng, block0);
            code.insert(code.end(), trailer.begin(), trailer.end());
            if (rng() % 5 == 0) code.insert(code.end(), 1 + rng() % 3, 0x00);
            skeletons.emplace(skeleton_digest(code), block0);
            const auto deployments = 1 + rng() % 4;
            for (std::size_t d = 0; d < deployments; ++d) {
                ordered_json rec;
                rec["block"] = std::min<std::uint64_t>(block0 + d * (rng() % 300'000), kSpan - 1);
                rec["address"] = hex_address(rng);
                rec["has_source"] = rng() % 3 == 0;
                rec["code_ref"] = "0x" + to_hex(code);
                records << rec.dump() << '\n';
            }
        }
    }

    // Each family gets a hidden set of weaknesses; tools report the ones they
    // cover with tool-specific recall, plus occasional noise.
    std::vector<SwcClass> classes;
    std::map<std::string, std::map<SwcClass, std::vector<std::string>>> findings_by_class;
    std::map<std::string, std::vector<std::string>> other_findings;
    for (const auto& [key, entry] : mapping.rows()) {
        if (entry.kind == Classification::swc) {
            findings_by_class[key.first][entry.swc_class].push_back(key.second);
            classes.push_back(entry.swc_class);
        } else {
            other_findings[key.first].push_back(key.second);
        }
    }
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

    std::ofstream runs(dir + "/runs.jsonl");
    const auto tools = mapping.tools();
    for (const auto& [digest, first_block] : skeletons) {
        std::set<SwcClass> hidden;
        for (const auto c : classes) {
            if (rng() % 6 == 0) hidden.insert(c);
        }
        for (const auto& tool : tools) {
            ToolRunRecord r;
            r.tool = tool;
            r.code_id = digest;
            std::size_t recall = 40;
            for (const char ch : tool) recall = (recall * 31 + static_cast<unsigned char>(ch)) % 50;
            recall += 40;
            for (const auto& [c, names] : findings_by_class[tool]) {
                const bool hit = hidden.count(c) ? rng() % 100 < recall : rng() % 100 < 4;
                if (hit) r.findings.push_back(names[rng() % names.size()]);
            }
            if (!other_findings[tool].empty() && rng() % 8 == 0) {
                r.findings.push_back(other_findings[tool][rng() % other_findings[tool].size()]);
            }
            if (rng() % 15 == 0) r.errors.push_back("analysis incomplete");
            const auto roll = rng() % 40;
            r.fails.timeout = roll == 0;
            r.fails.oom = roll == 1;
            r.fails.program_issue = roll == 2;
            r.duration_s = static_cast<double>(rng() % 180000) / 100.0;
            runs << to_json_line(r) << '\n';
        }
    }
    std::cout << "wrote " << skeletons.size() << " skeletons to " << dir << '\n';
    return 0;
}
