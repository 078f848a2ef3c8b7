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

// Deterministic generators and brute-force oracles shared by the unit and
// acceptance suites. Nothing here calls into the code under test except
// where noted (the opcode table is read as data).

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <skelforge/bytes.hpp>
#include <skelforge/findings.hpp>
#include <skelforge/opcodes.hpp>

namespace skelforge::testing {

using Rng = std::mt19937_64;

// CBOR-encoded metadata map followed by its 2-byte length, built with
// nlohmann's encoder rather than anything in the library.
inline Bytes metadata_trailer(const std::string& hash_key, const Bytes& hash,
                              const std::optional<Bytes>& solc = std::nullopt) {
    nlohmann::json map = nlohmann::json::object();
    map[hash_key] = nlohmann::json::binary(hash);
    if (solc) map["solc"] = nlohmann::json::binary(*solc);
    auto out = nlohmann::json::to_cbor(map);
    const auto length = out.size();
    out.push_back(static_cast<std::uint8_t>(length >> 8));
    out.push_back(static_cast<std::uint8_t>(length & 0xff));
    return out;
}

inline Bytes random_bytes(Rng& rng, std::size_t n) {
    Bytes out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng() & 0xff);
    return out;
}

struct GeneratedCode {
    Bytes code;
    std::vector<std::size_t> push_operand_positions;  // operand bytes of complete PUSHes
    std::vector<std::size_t> opcode_positions;        // non-PUSH, non-zero instruction bytes
    std::vector<std::size_t> metadata_hash_positions;  // hash bytes inside trailers
};

// Hand-rolled push width, independent of OpcodeTable.
inline std::size_t push_width(std::uint8_t byte) { return byte >= 0x60 && byte <= 0x7f ? byte - 0x5f : 0; }

// A body of `instructions` random instructions (PUSHes complete, last
// instruction non-PUSH and non-zero) followed by `trailers` metadata trailers
// interleaved with further bodies.
inline GeneratedCode generate_code(Rng& rng, std::size_t instructions, std::size_t trailers = 1) {
    GeneratedCode g;
    auto body = [&](std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            const bool last = i + 1 == n;
            std::uint8_t op = 0;
            const auto pick = rng() % 100;
            if (!last && pick < 35) {
                op = static_cast<std::uint8_t>(0x60 + rng() % 32);
            } else {
                do {
                    op = static_cast<std::uint8_t>(rng() & 0xff);
                } while (push_width(op) > 0 || op == 0x00);
            }
            if (push_width(op) == 0) g.opcode_positions.push_back(g.code.size());
            g.code.push_back(op);
            for (std::size_t k = 0; k < push_width(op); ++k) {
                g.push_operand_positions.push_back(g.code.size());
                g.code.push_back(static_cast<std::uint8_t>(rng() & 0xff));
            }
        }
    };
    body(instructions);
    for (std::size_t t = 0; t < trailers; ++t) {
        static const std::vector<std::pair<std::string, std::size_t>> kinds{{"bzzr0", 32}, {"bzzr1", 32}, {"ipfs", 34}};
        const auto& [key, len] = kinds[rng() % kinds.size()];
        const auto hash = random_bytes(rng, len);
        std::optional<Bytes> solc;
        if (rng() % 2 == 0) solc = Bytes{0, static_cast<std::uint8_t>(4 + rng() % 5), static_cast<std::uint8_t>(rng() % 26)};
        const auto trailer = metadata_trailer(key, hash, solc);
        // The hash payload sits right after its CBOR header; locate it by content.
        const auto at = std::search(trailer.begin(), trailer.end(), hash.begin(), hash.end()) - trailer.begin();
        for (std::size_t k = 0; k < hash.size(); ++k) {
            g.metadata_hash_positions.push_back(g.code.size() + static_cast<std::size_t>(at) + k);
        }
        g.code.insert(g.code.end(), trailer.begin(), trailer.end());
        if (t + 1 < trailers) body(1 + rng() % 8);
    }
    return g;
}

// Second linear decoder used as an oracle for ops_present: a table lookup
// per byte with explicit width arithmetic.
inline std::set<std::string> ops_present_oracle(ByteView code, const OpcodeTable& table) {
    std::map<int, std::pair<std::string, int>> assigned;
    for (const auto& spec : table.specs()) assigned[spec.byte_value] = {spec.mnemonic, spec.operand_width};
    std::set<std::string> out;
    for (std::size_t pc = 0; pc < code.size();) {
        const auto it = assigned.find(code[pc]);
        if (it == assigned.end()) {
            pc += 1;
            continue;
        }
        out.insert(it->second.first);
        pc += 1 + static_cast<std::size_t>(it->second.second);
    }
    return out;
}

// Partition of indices into classes of equal keys by pairwise comparison.
template <typename Key>
std::set<std::set<std::size_t>> pairwise_partition(const std::vector<Key>& keys) {
    std::vector<int> label(keys.size(), -1);
    int next = 0;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (label[i] >= 0) continue;
        label[i] = next;
        for (std::size_t j = i + 1; j < keys.size(); ++j) {
            if (label[j] < 0 && keys[j] == keys[i]) label[j] = next;
        }
        ++next;
    }
    std::map<int, std::set<std::size_t>> groups;
    for (std::size_t i = 0; i < keys.size(); ++i) groups[label[i]].insert(i);
    std::set<std::set<std::size_t>> out;
    for (auto& [_, g] : groups) out.insert(g);
    return out;
}

// Random Flagged/Swc fixture over tools t0..t{n-1}, classes 100..100+c-1
// and codes c0..c{k-1}.
inline FlaggedMatrix random_matrix(Rng& rng, std::size_t tools, std::size_t classes, std::size_t codes) {
    FlaggedMatrix m;
    for (std::size_t t = 0; t < tools; ++t) {
        const auto name = "t" + std::to_string(t);
        m.tools.push_back(name);
        auto& swc = m.swc[name];
        for (std::size_t c = 0; c < classes; ++c) {
            if (rng() % 3 != 0) swc.insert(static_cast<SwcClass>(100 + c));
        }
        auto& flagged = m.flagged[name];
        for (const auto s : swc) {
            auto& set = flagged[s];
            const auto density = rng() % 4;
            for (std::size_t k = 0; k < codes; ++k) {
                if (rng() % 4 < density) set.insert("c" + std::to_string(k));
            }
        }
    }
    std::sort(m.tools.begin(), m.tools.end());
    return m;
}

inline bool contains(const FlaggedMatrix& m, const std::string& tool, SwcClass s, const std::string& code) {
    const auto t = m.flagged.find(tool);
    if (t == m.flagged.end()) return false;
    const auto c = t->second.find(s);
    return c != t->second.end() && c->second.count(code) > 0;
}

inline std::set<std::string> universe(const FlaggedMatrix& m) {
    std::set<std::string> out;
    for (const auto& [_, by_class] : m.flagged) {
        for (const auto& [__, codes] : by_class) out.insert(codes.begin(), codes.end());
    }
    return out;
}

// Overlap by counting code by code over the shared classes.
inline std::optional<double> overlap_oracle(const FlaggedMatrix& m, const std::string& a, const std::string& b) {
    const auto all = universe(m);
    std::size_t num = 0;
    std::size_t den = 0;
    bool shared = false;
    for (const auto s : m.swc.at(a)) {
        if (!m.swc.at(b).count(s)) continue;
        shared = true;
        for (const auto& code : all) {
            if (!contains(m, a, s, code)) continue;
            ++den;
            if (contains(m, b, s, code)) ++num;
        }
    }
    if (!shared || den == 0) return std::nullopt;
    return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

inline std::optional<double> jaccard_oracle(const FlaggedMatrix& m, const std::string& a, const std::string& b,
                                            std::optional<SwcClass> only) {
    std::size_t inter = 0;
    std::size_t uni = 0;
    for (const auto& code : universe(m)) {
        bool in_a = false;
        bool in_b = false;
        for (const auto s : m.swc.at(a)) {
            if (!m.swc.at(b).count(s) || (only && s != *only)) continue;
            in_a = in_a || contains(m, a, s, code);
            in_b = in_b || contains(m, b, s, code);
        }
        inter += in_a && in_b;
        uni += in_a || in_b;
    }
    if (uni == 0) return std::nullopt;
    return 100.0 * static_cast<double>(inter) / static_cast<double>(uni);
}

// Per-code count of tools flagging it with class s, bucketed 1, 2, 3, 4+.
inline std::array<std::size_t, 4> breakdown_oracle(const FlaggedMatrix& m, const std::string& tool, SwcClass s) {
    std::array<std::size_t, 4> out{};
    for (const auto& code : universe(m)) {
        if (!contains(m, tool, s, code)) continue;
        std::size_t n = 0;
        for (const auto& t : m.tools) n += contains(m, t, s, code);
        out[std::min<std::size_t>(n, 4) - 1] += 1;
    }
    return out;
}

// One deployment record with inline code.
inline std::string record_line(const Bytes& code, std::uint64_t block, bool has_source = false) {
    nlohmann::json j{{"block", block}, {"has_source", has_source}, {"code_ref", "0x" + to_hex(code)}};
    return j.dump() + "\n";
}

struct Generated {
    std::string text;
    std::vector<Bytes> codes;  // per record
    std::vector<std::uint64_t> blocks;
    std::vector<bool> sources;
};

// Records drawn from a small pool of bodies so skeletons, raw codes and
// metadata collide at every pipeline stage.
inline Generated generate_records(Rng& rng, std::size_t n, std::size_t pool = 12) {
    std::vector<GeneratedCode> bodies;
    for (std::size_t i = 0; i < pool; ++i) bodies.push_back(generate_code(rng, 2 + rng() % 20, 0));
    Generated g;
    for (std::size_t i = 0; i < n; ++i) {
        auto code = bodies[rng() % pool];
        const auto variant = rng() % 4;
        if (variant >= 1) {
            for (const auto p : code.push_operand_positions) {
                if (rng() % 3 == 0) code.code[p] = static_cast<std::uint8_t>(rng() % 3);
            }
        }
        if (variant >= 2) {
            const auto t = metadata_trailer("bzzr0", Bytes(32, static_cast<std::uint8_t>(rng() % 3)));
            code.code.insert(code.code.end(), t.begin(), t.end());
        }
        if (variant == 3) code.code.insert(code.code.end(), rng() % 3, 0x00);
        const auto block = rng() % 1'000'000;
        const bool src = rng() % 5 == 0;
        g.text += record_line(code.code, block, src);
        g.codes.push_back(code.code);
        g.blocks.push_back(block);
        g.sources.push_back(src);
    }
    return g;
}

}  // namespace skelforge::testing
