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

#include "chalset/tokenize.hpp"

#include <algorithm>

#include "chalset/utf8.hpp"

namespace chalset {
namespace {

bool is_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' ||
         c == U'\v' || c == U'\u00A0';
}

bool is_punct(char32_t c) {
  if (c < 0x80) {
    return (c >= U'!' && c <= U'/') || (c >= U':' && c <= U'@') ||
           (c >= U'[' && c <= U'`') || (c >= U'{' && c <= U'~');
  }
  static constexpr char32_t kWide[] = {
      U'¡', U'«', U'»', U'¿', U'–', U'—',
      U'‘', U'’', U'“', U'”', U'…',
  };
  return std::find(std::begin(kWide), std::end(kWide), c) != std::end(kWide);
}

char32_t to_lower(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 32;
  // Latin-1 uppercase letters, skipping the multiplication sign.
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  return c;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  const std::u32string cps = utf8::decode_lossy(text);
  std::size_t pos = 0;
  while (pos < cps.size()) {
    while (pos < cps.size() && is_space(cps[pos])) ++pos;
    std::size_t end = pos;
    while (end < cps.size() && !is_space(cps[end])) ++end;
    std::size_t first = pos;
    std::size_t last = end;
    while (first < last && is_punct(cps[first])) ++first;
    while (last > first && is_punct(cps[last - 1])) --last;
    if (first < last) {
      std::u32string token(cps.begin() + first, cps.begin() + last);
      std::transform(token.begin(), token.end(), token.begin(), to_lower);
      tokens.push_back(utf8::encode(token));
    }
    pos = end;
  }
  return tokens;
}

}  // namespace chalset
