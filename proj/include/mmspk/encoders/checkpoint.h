// Copyright (c) 2026 The mmspk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MMSPK_ENCODERS_CHECKPOINT_H_
#define MMSPK_ENCODERS_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "mmspk/encoders/mlp_encoder.h"
#include "mmspk/encoders/text_encoder.h"

namespace mmspk {

// Single-file encoder checkpoint. Layout (docs/formats.md has the details):
//
//   offset 0  "MMSK"                    magic
//   offset 4  uint8 format version      kCheckpointVersion
//   offset 5  uint8 modality tag        1 speech, 2 face, 3 text
//   offset 6  uint8 payload kind        CheckpointKind
//   offset 7  uint8 reserved (0)
//   offset 8  ASCII shape line          decimal integers separated by ' ',
//                                       terminated by '\n'
//   then      little-endian float64 parameters
//   then      uint64 LE FNV-1a of every preceding byte
inline constexpr uint8_t kCheckpointVersion = 1;

enum class CheckpointKind : uint8_t { kMlp = 0, kText = 1, kMatrix = 2 };

std::string SerializeMlp(const MlpEncoder &encoder);
std::string SerializeText(const TextEncoder &encoder);
// Bare matrix (classifier weights); `modality` is stored as a tag only.
std::string SerializeMatrix(const Matrix &m, Modality modality);

// All parsers throw FormatError on bad magic, version, kind, checksum, or
// a payload whose length disagrees with the shape line.
MlpEncoder ParseMlp(const std::string &bytes);
TextEncoder ParseText(const std::string &bytes);
Matrix ParseMatrix(const std::string &bytes);

// Throws FormatError on I/O failure too.
void WriteFileBytes(const std::filesystem::path &path,
                    const std::string &bytes);
std::string ReadFileBytes(const std::filesystem::path &path);

uint64_t Fnv1a64(std::string_view bytes);

}  // namespace mmspk

#endif  // MMSPK_ENCODERS_CHECKPOINT_H_
