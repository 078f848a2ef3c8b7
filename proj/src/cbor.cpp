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

#include <skelforge/cbor.hpp>

namespace skelforge::cbor {

namespace {

    constexpr int kMaxDepth = 8;

    class Reader {
      public:
        explicit Reader(ByteView data) : data_(data) {}

        [[nodiscard]] bool at_end() const noexcept { return pos_ == data_.size(); }

        // Reads the initial byte and argument; fails on reserved or indefinite encodings.
        bool head(std::uint8_t& major, std::uint64_t& arg) {
            if (pos_ >= data_.size()) return false;
            const auto initial = data_[pos_++];
            major = initial >> 5;
            const std::uint8_t info = initial & 0x1f;
            last_info_ = info;
            if (info < 24) {
                arg = info;
                return true;
            }
            std::size_t width = 0;
            switch (info) {
                case 24: width = 1; break;
                case 25: width = 2; break;
                case 26: width = 4; break;
                case 27: width = 8; break;
                default: return false;  // 28..30 reserved, 31 indefinite
            }
            if (data_.size() - pos_ < width) return false;
            arg = 0;
            for (std::size_t i = 0; i < width; ++i) arg = (arg << 8) | data_[pos_++];
            return true;
        }

        bool take(std::uint64_t n, ByteView& out) {
            if (n > data_.size() - pos_) return false;
            out = data_.subspan(pos_, static_cast<std::size_t>(n));
            pos_ += static_cast<std::size_t>(n);
            return true;
        }

        bool value(Value& out, int depth) {
            if (depth > kMaxDepth) return false;
            std::uint8_t major = 0;
            std::uint64_t arg = 0;
            if (!head(major, arg)) return false;
            out.number = arg;
            ByteView payload;
            switch (major) {
                case 0:
                    out.kind = Kind::unsigned_int;
                    return true;
                case 1:
                    out.kind = Kind::negative_int;
                    return true;
                case 2:
                    out.kind = Kind::byte_string;
                    if (!take(arg, payload)) return false;
                    out.bytes.assign(payload.begin(), payload.end());
                    return true;
                case 3:
                    out.kind = Kind::text_string;
                    if (!take(arg, payload)) return false;
                    out.text.assign(payload.begin(), payload.end());
                    return true;
                case 4: {
                    out.kind = Kind::array;
                    for (std::uint64_t i = 0; i < arg; ++i) {
                        Value skipped;
                        if (!value(skipped, depth + 1)) return false;
                    }
                    return true;
                }
                case 5: {
                    out.kind = Kind::map;
                    for (std::uint64_t i = 0; i < 2 * arg; ++i) {
                        Value skipped;
                        if (!value(skipped, depth + 1)) return false;
                    }
                    return true;
                }
                case 6: {
                    out.kind = Kind::tag;
                    Value tagged;
                    return value(tagged, depth + 1);
                }
                default: {
                    // Major 7: head() already consumed the float bits for info 25..27.
                    out.kind = last_info_ >= 25 ? Kind::floating : Kind::simple;
                    return true;
                }
            }
        }

      private:
        ByteView data_;
        std::size_t pos_{0};
        std::uint8_t last_info_{0};
    };

}  // namespace

std::optional<std::vector<MapEntry>> decode_text_keyed_map(ByteView data) {
    Reader reader(data);
    std::uint8_t major = 0;
    std::uint64_t count = 0;
    if (!reader.head(major, count) || major != 5) return std::nullopt;
    if (count > data.size()) return std::nullopt;  // each entry needs at least two bytes

    std::vector<MapEntry> entries;
    entries.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t i = 0; i < count; ++i) {
        Value key;
        if (!reader.value(key, 1) || key.kind != Kind::text_string) return std::nullopt;
        MapEntry entry{std::move(key.text), {}};
        if (!reader.value(entry.value, 1)) return std::nullopt;
        entries.push_back(std::move(entry));
    }
    if (!reader.at_end()) return std::nullopt;
    return entries;
}

}  // namespace skelforge::cbor
