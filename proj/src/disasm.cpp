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

#include <skelforge/disasm.hpp>

#include <algorithm>
#include <array>
#include <cstdio>

namespace skelforge {

Disassembly disassemble(ByteView code, ScanMode mode, std::span<const std::size_t> boundaries,
                        const OpcodeTable& table) {
    std::size_t limit = code.size();
    if (mode == ScanMode::first_block && !boundaries.empty()) {
        limit = std::min(limit, *std::min_element(boundaries.begin(), boundaries.end()));
    }

    Disassembly out;
    out.scanned_length = limit;
    std::size_t pc = 0;
    while (pc < limit) {
        Instruction ins;
        ins.offset = pc;
        ins.byte = code[pc];
        ins.spec = table.at(ins.byte);
        ++pc;
        if (ins.spec == nullptr) {
            out.diagnostics.push_back({ins.offset, DiagnosticKind::invalid_opcode});
        } else if (ins.spec->operand_width > 0) {
            const std::size_t take = std::min<std::size_t>(ins.spec->operand_width, limit - pc);
            ins.operand.assign(code.begin() + static_cast<std::ptrdiff_t>(pc),
                               code.begin() + static_cast<std::ptrdiff_t>(pc + take));
            pc += take;
            if (take < ins.spec->operand_width) {
                ins.incomplete = true;
                out.diagnostics.push_back({ins.offset, DiagnosticKind::incomplete_push});
            }
        }
        out.instructions.push_back(std::move(ins));
    }
    return out;
}

Bytes reserialize(const Disassembly& disassembly) {
    Bytes out;
    out.reserve(disassembly.scanned_length);
    for (const auto& ins : disassembly.instructions) {
        out.push_back(ins.byte);
        out.insert(out.end(), ins.operand.begin(), ins.operand.end());
    }
    return out;
}

std::set<std::string> ops_present(ByteView code, const OpcodeTable& table) {
    // Mnemonic lookup per byte, skipping operands; no need to materialise the listing.
    std::set<std::string> out;
    std::array<bool, 256> seen{};
    std::size_t pc = 0;
    while (pc < code.size()) {
        const auto byte = code[pc];
        const auto* spec = table.at(byte);
        ++pc;
        if (spec == nullptr) continue;
        if (!seen[byte]) {
            seen[byte] = true;
            out.insert(spec->mnemonic);
        }
        pc += spec->operand_width;
    }
    return out;
}

std::string format_listing(const Disassembly& disassembly) {
    std::string out;
    char offset[32];
    for (const auto& ins : disassembly.instructions) {
        std::snprintf(offset, sizeof offset, "%04zx", ins.offset);
        out += offset;
        out += ": ";
        out += ins.mnemonic();
        if (ins.is_push()) {
            out += ' ';
            out += to_hex(ins.operand);
        }
        if (ins.incomplete) out += " INCOMPLETE";
        out += '\n';
    }
    return out;
}

std::string_view to_string(DiagnosticKind kind) noexcept {
    switch (kind) {
        case DiagnosticKind::incomplete_push:
            return "incomplete_push";
        case DiagnosticKind::invalid_opcode:
            return "invalid_opcode";
    }
    return "unknown";
}

}  // namespace skelforge
