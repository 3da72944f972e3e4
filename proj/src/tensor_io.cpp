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

#include "ocseg/tensor_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "ocseg/error.hpp"

namespace ocseg {
namespace {

std::array<char, 4> to_le_bytes(float v) {
  auto bits = std::bit_cast<std::uint32_t>(v);
  return {static_cast<char>(bits & 0xff), static_cast<char>((bits >> 8) & 0xff),
          static_cast<char>((bits >> 16) & 0xff),
          static_cast<char>((bits >> 24) & 0xff)};
}

float from_le_bytes(const unsigned char* b) {
  const std::uint32_t bits = static_cast<std::uint32_t>(b[0]) |
                             (static_cast<std::uint32_t>(b[1]) << 8) |
                             (static_cast<std::uint32_t>(b[2]) << 16) |
                             (static_cast<std::uint32_t>(b[3]) << 24);
  return std::bit_cast<float>(bits);
}

}  // namespace

void write_tensor(std::ostream& out, const FeatureMap& map) {
  out << "v1 " << map.height() << ' ' << map.width() << ' ' << map.channels()
      << ' ' << map.stride() << '\n';
  std::string payload;
  payload.reserve(map.data().size() * 4);
  for (const float v : map.data()) {
    const auto bytes = to_le_bytes(v);
    payload.append(bytes.data(), bytes.size());
  }
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing tensor payload");
}

FeatureMap read_tensor(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) {
    throw Error(ErrorCode::kMalformedManifest, "tensor file has no header");
  }
  std::istringstream fields(header);
  std::string version;
  long long h = -1, w = -1, c = -1, stride = -1;
  fields >> version >> h >> w >> c >> stride;
  std::string extra;
  if (version != "v1" || !fields || (fields >> extra) || h < 0 || w < 0 ||
      c < 0 || stride < 1) {
    throw Error(ErrorCode::kMalformedManifest,
                "bad tensor header: '" + header + "'");
  }
  const std::size_t count = static_cast<std::size_t>(h) * w * c;
  std::vector<unsigned char> raw(count * 4);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "tensor payload shorter than header shape");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::kShapeMismatch,
                "tensor payload longer than header shape");
  }
  std::vector<float> data(count);
  for (std::size_t i = 0; i < count; ++i) data[i] = from_le_bytes(&raw[i * 4]);
  return FeatureMap(static_cast<int>(stride), static_cast<int>(h),
                    static_cast<int>(w), static_cast<int>(c), std::move(data));
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot open " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::kIo, "failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, "cannot rename into " + path.string() + ": " +
                                    ec.message());
  }
}

void write_tensor_file(const std::filesystem::path& path, const FeatureMap& map) {
  std::ostringstream out(std::ios::binary);
  write_tensor(out, map);
  write_file_atomic(path, out.str());
}

FeatureMap read_tensor_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  return read_tensor(in);
}

}  // namespace ocseg
