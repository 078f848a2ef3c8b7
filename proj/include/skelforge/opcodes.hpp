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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace skelforge {

struct OpcodeSpec {
    std::uint8_t byte_value{0};
    std::string mnemonic;
    std::uint8_t operand_width{0};                    // 1..32 for PUSH1..PUSH32, else 0
    std::optional<std::uint64_t> introduced_at_block;  // nullopt: available since genesis
};

// Byte-indexed opcode table. Unassigned byte values have no entry and decode
// as INVALID.
//
// CSV format (lines starting with '#' are comments):
//   byte_value,mnemonic,operand_width,introduced_at_block
//   0xf4,DELEGATECALL,0,1150000
class OpcodeTable {
  public:
    // Table compiled in from data/opcodes.csv.
    static const OpcodeTable& bundled();

    static OpcodeTable from_csv(std::string_view csv);
    static OpcodeTable load(const std::filesystem::path& path);

    [[nodiscard]] const OpcodeSpec* at(std::uint8_t byte) const noexcept {
        const auto idx = slots_[byte];
        return idx < 0 ? nullptr : &specs_[static_cast<std::size_t>(idx)];
    }

    // Throws LookupError for unknown mnemonics.
    [[nodiscard]] const OpcodeSpec& by_mnemonic(std::string_view mnemonic) const;
    [[nodiscard]] const OpcodeSpec* find(std::string_view mnemonic) const noexcept;

    [[nodiscard]] const std::vector<OpcodeSpec>& specs() const noexcept { return specs_; }

    // True iff the operation exists at `block` (introduced at or before it).
    [[nodiscard]] bool is_active(std::string_view mnemonic, std::uint64_t block) const;

  private:
    std::vector<OpcodeSpec> specs_;
    std::array<int, 256> slots_{};
    std::unordered_map<std::string, std::size_t> by_name_;
};

inline bool op_is_active(std::string_view mnemonic, std::uint64_t block) {
    return OpcodeTable::bundled().is_active(mnemonic, block);
}

}  // namespace skelforge
