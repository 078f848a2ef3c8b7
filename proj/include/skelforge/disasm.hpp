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

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <skelforge/bytes.hpp>
#include <skelforge/opcodes.hpp>

namespace skelforge {

enum class ScanMode {
    full,         // decode the whole input
    first_block,  // stop at the earliest metadata boundary supplied by the caller
};

struct Instruction {
    std::size_t offset{0};
    std::uint8_t byte{0};
    const OpcodeSpec* spec{nullptr};  // nullptr: unassigned byte, decoded as INVALID
    Bytes operand;
    bool incomplete{false};  // fewer operand bytes remained than the PUSH width

    [[nodiscard]] bool is_invalid() const noexcept { return spec == nullptr; }
    [[nodiscard]] bool is_push() const noexcept { return spec != nullptr && spec->operand_width > 0; }
    [[nodiscard]] std::string_view mnemonic() const noexcept {
        return spec == nullptr ? std::string_view{"INVALID"} : std::string_view{spec->mnemonic};
    }
    [[nodiscard]] std::size_t size() const noexcept { return 1 + operand.size(); }
};

enum class DiagnosticKind { incomplete_push, invalid_opcode };

struct Diagnostic {
    std::size_t offset{0};
    DiagnosticKind kind{DiagnosticKind::invalid_opcode};

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct Disassembly {
    std::vector<Instruction> instructions;
    std::size_t scanned_length{0};
    std::vector<Diagnostic> diagnostics;
};

// Linear sweep from offset 0. Never fails: malformed input shows up as
// diagnostics. In first_block mode, `boundaries` holds metadata start offsets
// and decoding stops at the smallest of them (or runs to the end if empty).
Disassembly disassemble(ByteView code, ScanMode mode = ScanMode::full, std::span<const std::size_t> boundaries = {},
                        const OpcodeTable& table = OpcodeTable::bundled());

// Opcode bytes followed by operand bytes, in order.
Bytes reserialize(const Disassembly& disassembly);

// Mnemonics of every assigned instruction in the full-scan decode. This is an
// overapproximation: embedded data may decode as operations.
std::set<std::string> ops_present(ByteView code, const OpcodeTable& table = OpcodeTable::bundled());

// `<offset-hex>: <MNEMONIC> [<operand-hex>] [INCOMPLETE]`, one line per instruction.
std::string format_listing(const Disassembly& disassembly);

std::string_view to_string(DiagnosticKind kind) noexcept;

}  // namespace skelforge
