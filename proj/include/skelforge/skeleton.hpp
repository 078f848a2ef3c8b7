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
#include <string>

#include <skelforge/bytes.hpp>
#include <skelforge/metadata.hpp>
#include <skelforge/opcodes.hpp>

namespace skelforge {

struct RemovedCounts {
    std::size_t metadata_bytes{0};
    std::size_t push_operand_bytes{0};
    std::size_t trailing_zero_bytes{0};
    std::size_t constructor_arg_bytes{0};

    [[nodiscard]] std::size_t total() const noexcept {
        return metadata_bytes + push_operand_bytes + trailing_zero_bytes + constructor_arg_bytes;
    }
    friend bool operator==(const RemovedCounts&, const RemovedCounts&) = default;
};

// Canonical form used as the equivalence key of a code family. The canonical
// bytes are not executable: PUSH opcodes are kept without their operands.
struct Skeleton {
    Bytes canonical_bytes;
    std::string digest;  // SHA-256 of canonical_bytes, lowercase hex
    RemovedCounts removed;
};

// Intermediate outputs of the skeleton pipeline, one per stage.
struct SkeletonStages {
    Bytes without_metadata;      // metadata (and constructor arguments) removed
    Bytes without_push_args;     // ... and PUSH operands deleted
    Bytes skeleton;              // ... and trailing 0x00 bytes stripped
    RemovedCounts removed;
};

SkeletonStages skeleton_stages(ByteView code, CodeKind kind = CodeKind::runtime,
                               const OpcodeTable& table = OpcodeTable::bundled());

Skeleton skeletonize(ByteView code, CodeKind kind = CodeKind::runtime,
                     const OpcodeTable& table = OpcodeTable::bundled());

std::string skeleton_digest(ByteView code, CodeKind kind = CodeKind::runtime,
                            const OpcodeTable& table = OpcodeTable::bundled());

// Deletes the operand bytes of every PUSH in a linear decode of `code`.
Bytes drop_push_operands(ByteView code, const OpcodeTable& table = OpcodeTable::bundled());

}  // namespace skelforge
