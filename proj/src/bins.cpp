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

#include <skelforge/bins.hpp>

#include <cstdio>

namespace skelforge {

BinSeries make_series(std::uint64_t bin_width, std::optional<std::uint64_t> last_index) {
    BinSeries series;
    series.bin_width = bin_width;
    if (last_index) {
        series.bins.reserve(*last_index + 1);
        for (std::uint64_t i = 0; i <= *last_index; ++i) series.bins.push_back(Bin{i, 0, 0});
    }
    return series;
}

std::string format_percent(std::optional<double> value) {
    if (!value) return {};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", *value);
    return buf;
}

namespace {

    void write_row(std::ostream& out, const Bin& bin) {
        out << bin.index << ',' << bin.numerator << ',' << bin.denominator << ',' << format_percent(bin.percentage())
            << '\n';
    }

}  // namespace

void write_series_csv(std::ostream& out, const BinSeries& series) {
    out << "bin_index,numerator,denominator,percentage\n";
    for (const auto& bin : series.bins) write_row(out, bin);
}

void write_series_csv(std::ostream& out, const std::vector<NamedSeries>& series) {
    out << "series,bin_index,numerator,denominator,percentage\n";
    for (const auto& named : series) {
        for (const auto& bin : named.series.bins) {
            out << named.name << ',';
            write_row(out, bin);
        }
    }
}

}  // namespace skelforge
