// Copyright 2026 The ocseg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Tensor files: one text header line "v1 <h> <w> <c> <stride>" followed by a
// little-endian float32 payload in row-major, channel-last order.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ocseg/rasters.hpp"

namespace ocseg {

void write_tensor(std::ostream& out, const FeatureMap& map);
FeatureMap read_tensor(std::istream& in);

// Writes through a temporary file and renames it into place.
void write_tensor_file(const std::filesystem::path& path, const FeatureMap& map);
FeatureMap read_tensor_file(const std::filesystem::path& path);

// Writes `bytes` to `path` via temp file + rename.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& bytes);

}  // namespace ocseg
