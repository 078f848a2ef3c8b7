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

#include <skelforge/skeleton.hpp>

#include <algorithm>

#include <skelforge/sha256.hpp>

namespace skelforge {

Bytes drop_push_operands(ByteView code, const OpcodeTable& table) {
    Bytes out;
    out.reserve(code.size());
    std::size_t pc = 0;
    while (pc < code.size()) {
        const auto byte = code[pc++];
        out.push_back(byte);
        if (const auto* spec = table.at(byte)) {
            pc = std::min(code.size(), pc + spec->operand_width);
        }
    }
    return out;
}

SkeletonStages skeleton_stages(ByteView code, CodeKind kind, const OpcodeTable& table) {
    SkeletonStages stages;
    auto stripped = strip_metadata(code, StripMode::remove, kind);
    for (const auto& s : stripped.sections) stages.removed.metadata_bytes += s.size();
    stages.removed.constructor_arg_bytes = stripped.constructor_arg_bytes;
    stages.without_metadata = std::move(stripped.stripped);

    stages.without_push_args = drop_push_operands(stages.without_metadata, table);
    stages.removed.push_operand_bytes = stages.without_metadata.size() - stages.without_push_args.size();

    stages.skeleton = stages.without_push_args;
    while (!stages.skeleton.empty() && stages.skeleton.back() == 0x00) stages.skeleton.pop_back();
    stages.removed.trailing_zero_bytes = stages.without_push_args.size() - stages.skeleton.size();
    return stages;
}

Skeleton skeletonize(ByteView code, CodeKind kind, const OpcodeTable& table) {
    auto stages = skeleton_stages(code, kind, table);
    Skeleton out;
    out.digest = sha256_hex(stages.skeleton);
    out.canonical_bytes = std::move(stages.skeleton);
    out.removed = stages.removed;
    return out;
}

std::string skeleton_digest(ByteView code, CodeKind kind, const OpcodeTable& table) {
    return skeletonize(code, kind, table).digest;
}

}  // namespace skelforge
