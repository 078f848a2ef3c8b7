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

#include <skelforge/opcodes.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

#include <skelforge/embedded_tables.hpp>
#include <skelforge/error.hpp>

namespace skelforge {

namespace {

    std::string_view trim(std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
        return s;
    }

    std::vector<std::string_view> split(std::string_view line, char sep) {
        std::vector<std::string_view> out;
        std::size_t start = 0;
        for (;;) {
            const auto pos = line.find(sep, start);
            out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
            if (pos == std::string_view::npos) break;
            start = pos + 1;
        }
        return out;
    }

    template <typename T>
    T parse_number(std::string_view text, int base, std::size_t line_no, const char* what) {
        T value{};
        const auto* first = text.data();
        const auto* last = text.data() + text.size();
        const auto [ptr, ec] = std::from_chars(first, last, value, base);
        if (ec != std::errc{} || ptr != last || text.empty()) {
            throw TableError("opcode table line " + std::to_string(line_no) + ": bad " + what + " '" +
                             std::string(text) + "'");
        }
        return value;
    }

}  // namespace

const OpcodeTable& OpcodeTable::bundled() {
    static const OpcodeTable table = from_csv(embedded::kOpcodesCsv);
    return table;
}

OpcodeTable OpcodeTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open opcode table " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_csv(buffer.str());
}

OpcodeTable OpcodeTable::from_csv(std::string_view csv) {
    OpcodeTable table;
    table.slots_.fill(-1);

    bool header_seen = false;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < csv.size()) {
        auto end = csv.find('\n', start);
        if (end == std::string_view::npos) end = csv.size();
        const auto line = trim(csv.substr(start, end - start));
        start = end + 1;
        ++line_no;

        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            header_seen = true;
            if (line.starts_with("byte_value")) continue;
        }

        const auto cols = split(line, ',');
        if (cols.size() != 4) {
            throw TableError("opcode table line " + std::to_string(line_no) + ": expected 4 columns");
        }
        auto byte_text = cols[0];
        if (byte_text.starts_with("0x") || byte_text.starts_with("0X")) byte_text.remove_prefix(2);

        OpcodeSpec spec;
        const auto byte = parse_number<unsigned>(byte_text, 16, line_no, "byte_value");
        if (byte > 0xff) throw TableError("opcode table line " + std::to_string(line_no) + ": byte_value > 0xff");
        spec.byte_value = static_cast<std::uint8_t>(byte);
        spec.mnemonic = std::string(cols[1]);
        if (spec.mnemonic.empty()) throw TableError("opcode table line " + std::to_string(line_no) + ": empty mnemonic");
        const auto width = parse_number<unsigned>(cols[2], 10, line_no, "operand_width");
        if (width > 32) throw TableError("opcode table line " + std::to_string(line_no) + ": operand_width > 32");
        spec.operand_width = static_cast<std::uint8_t>(width);
        if (!cols[3].empty()) {
            spec.introduced_at_block = parse_number<std::uint64_t>(cols[3], 10, line_no, "introduced_at_block");
        }

        const bool push_range = spec.byte_value >= 0x60 && spec.byte_value <= 0x7f;
        if ((spec.operand_width > 0) != push_range ||
            (push_range && spec.operand_width != spec.byte_value - 0x5f)) {
            throw TableError("opcode table line " + std::to_string(line_no) + ": operand_width " +
                             std::to_string(width) + " inconsistent with byte " + std::string(cols[0]));
        }
        if (table.slots_[spec.byte_value] >= 0) {
            throw TableError("opcode table line " + std::to_string(line_no) + ": duplicate byte_value " +
                             std::string(cols[0]));
        }
        if (table.by_name_.contains(spec.mnemonic)) {
            throw TableError("opcode table line " + std::to_string(line_no) + ": duplicate mnemonic " + spec.mnemonic);
        }

        table.slots_[spec.byte_value] = static_cast<int>(table.specs_.size());
        table.by_name_.emplace(spec.mnemonic, table.specs_.size());
        table.specs_.push_back(std::move(spec));
    }
    return table;
}

const OpcodeSpec* OpcodeTable::find(std::string_view mnemonic) const noexcept {
    const auto it = by_name_.find(std::string(mnemonic));
    return it == by_name_.end() ? nullptr : &specs_[it->second];
}

const OpcodeSpec& OpcodeTable::by_mnemonic(std::string_view mnemonic) const {
    const auto* spec = find(mnemonic);
    if (spec == nullptr) throw LookupError("unknown mnemonic '" + std::string(mnemonic) + "'");
    return *spec;
}

bool OpcodeTable::is_active(std::string_view mnemonic, std::uint64_t block) const {
    const auto& spec = by_mnemonic(mnemonic);
    return !spec.introduced_at_block || *spec.introduced_at_block <= block;
}

}  // namespace skelforge
