// Copyright 2026 The seloc Authors
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

#include <zlib.h>

#include <cstdint>

#include "codegen/codegen.hpp"
#include "common/error.hpp"

namespace seloc::codegen {

namespace {

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

// Fixed DOS timestamp (1980-01-01 00:00) keeps archives byte-stable.
constexpr std::uint16_t kDosTime = 0;
constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;

}  // namespace

std::string toZip(const ProjectBundle& bundle) {
  struct Entry {
    std::string name;
    std::uint32_t crc;
    std::uint32_t size;
    std::uint32_t offset;
  };
  std::string out;
  std::vector<Entry> entries;
  for (const auto& [path, content] : bundle.files) {
    if (content.size() > 0xffffffffu || out.size() > 0xffffffffu) {
      throw Error("IoError", "bundle too large for a zip archive");
    }
    Entry e{path,
            static_cast<std::uint32_t>(
                ::crc32(0L, reinterpret_cast<const Bytef*>(content.data()), static_cast<uInt>(content.size()))),
            static_cast<std::uint32_t>(content.size()), static_cast<std::uint32_t>(out.size())};
    put32(out, 0x04034b50);
    put16(out, 20);  // version needed
    put16(out, 0);   // flags
    put16(out, 0);   // stored
    put16(out, kDosTime);
    put16(out, kDosDate);
    put32(out, e.crc);
    put32(out, e.size);
    put32(out, e.size);
    put16(out, static_cast<std::uint16_t>(path.size()));
    put16(out, 0);
    out += path;
    out += content;
    entries.push_back(std::move(e));
  }
  const auto centralStart = static_cast<std::uint32_t>(out.size());
  for (const auto& e : entries) {
    put32(out, 0x02014b50);
    put16(out, 20);  // version made by
    put16(out, 20);
    put16(out, 0);
    put16(out, 0);
    put16(out, kDosTime);
    put16(out, kDosDate);
    put32(out, e.crc);
    put32(out, e.size);
    put32(out, e.size);
    put16(out, static_cast<std::uint16_t>(e.name.size()));
    put16(out, 0);  // extra
    put16(out, 0);  // comment
    put16(out, 0);  // disk
    put16(out, 0);  // internal attrs
    put32(out, 0);  // external attrs
    put32(out, e.offset);
    out += e.name;
  }
  const auto centralSize = static_cast<std::uint32_t>(out.size() - centralStart);
  put32(out, 0x06054b50);
  put16(out, 0);
  put16(out, 0);
  put16(out, static_cast<std::uint16_t>(entries.size()));
  put16(out, static_cast<std::uint16_t>(entries.size()));
  put32(out, centralSize);
  put32(out, centralStart);
  put16(out, 0);
  return out;
}

}  // namespace seloc::codegen
