// Copyright 2026 The Chalset Authors.
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

#include "chalset/utf8.hpp"

#include <cstdint>

namespace chalset::utf8 {
namespace {

// Length of the sequence starting at text[pos], or 0 if it is not a valid
// shortest-form encoding of a scalar value.
std::size_t sequence_length(std::string_view text, std::size_t pos) {
  const auto byte = [&](std::size_t i) {
    return static_cast<std::uint8_t>(text[i]);
  };
  const std::uint8_t lead = byte(pos);
  std::size_t len = 0;
  std::uint32_t cp = 0;
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0) {
    len = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    cp = lead & 0x07;
  } else {
    return 0;
  }
  if (pos + len > text.size()) return 0;
  for (std::size_t i = 1; i < len; ++i) {
    const std::uint8_t cont = byte(pos + i);
    if ((cont & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (cont & 0x3F);
  }
  static constexpr std::uint32_t kMinForLength[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMinForLength[len] || cp > 0x10FFFF) return 0;
  if (cp >= 0xD800 && cp <= 0xDFFF) return 0;
  return len;
}

}  // namespace

std::optional<std::vector<std::size_t>> boundaries(std::string_view text) {
  std::vector<std::size_t> out;
  out.reserve(text.size() + 1);
  std::size_t pos = 0;
  while (pos < text.size()) {
    out.push_back(pos);
    const std::size_t len = sequence_length(text, pos);
    if (len == 0) return std::nullopt;
    pos += len;
  }
  out.push_back(text.size());
  return out;
}

std::optional<std::size_t> length(std::string_view text) {
  auto b = boundaries(text);
  if (!b) return std::nullopt;
  return b->size() - 1;
}

std::string slice(std::string_view text, std::size_t start, std::size_t end) {
  const auto b = boundaries(text);
  if (!b || start > end || end >= b->size()) return {};
  return std::string(text.substr((*b)[start], (*b)[end] - (*b)[start]));
}

std::u32string decode_lossy(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t len = sequence_length(text, pos);
    if (len == 0) {
      out.push_back(U'\uFFFD');
      ++pos;
      continue;
    }
    const auto lead = static_cast<std::uint8_t>(text[pos]);
    std::uint32_t cp = len == 1   ? lead
                       : len == 2 ? (lead & 0x1Fu)
                       : len == 3 ? (lead & 0x0Fu)
                                  : (lead & 0x07u);
    for (std::size_t i = 1; i < len; ++i) {
      cp = (cp << 6) | (static_cast<std::uint8_t>(text[pos + i]) & 0x3Fu);
    }
    out.push_back(static_cast<char32_t>(cp));
    pos += len;
  }
  return out;
}

std::string encode(std::u32string_view code_points) {
  std::string out;
  out.reserve(code_points.size());
  for (const char32_t c : code_points) {
    const auto cp = static_cast<std::uint32_t>(c);
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

}  // namespace chalset::utf8
