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
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace skelforge {

inline constexpr std::uint64_t kDefaultBinWidth = 100'000;

struct Bin {
    std::uint64_t index{0};
    std::size_t numerator{0};
    std::size_t denominator{0};

    // nullopt marks an empty bin; an empty bin is not 0 %.
    [[nodiscard]] std::optional<double> percentage() const noexcept {
        if (denominator == 0) return std::nullopt;
        return 100.0 * static_cast<double>(numerator) / static_cast<double>(denominator);
    }
};

struct BinSeries {
    std::uint64_t bin_width{kDefaultBinWidth};
    std::vector<Bin> bins;
};

[[nodiscard]] constexpr std::uint64_t bin_index(std::uint64_t block, std::uint64_t bin_width) noexcept {
    return block / bin_width;
}

// Series covering bins 0..last_index, all counts zero.
BinSeries make_series(std::uint64_t bin_width, std::optional<std::uint64_t> last_index);

// One decimal, or the empty string for nullopt.
std::string format_percent(std::optional<double> value);

struct NamedSeries {
    std::string name;
    BinSeries series;
};

// Columns: bin_index,numerator,denominator,percentage
void write_series_csv(std::ostream& out, const BinSeries& series);
// Columns: series,bin_index,numerator,denominator,percentage
void write_series_csv(std::ostream& out, const std::vector<NamedSeries>& series);

}  // namespace skelforge
