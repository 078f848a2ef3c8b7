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

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace skelforge {

struct SolcVersion {
    unsigned major{0};
    unsigned minor{0};
    unsigned patch{0};

    friend auto operator<=>(const SolcVersion&, const SolcVersion&) = default;

    [[nodiscard]] std::string to_string() const;

    // Accepts "0.4.24", "v0.4.24", "0.8.7+commit.e28d00a7" and similar;
    // anything after the patch number must start with '+' or '-'.
    static std::optional<SolcVersion> parse(std::string_view text);
};

}  // namespace skelforge
