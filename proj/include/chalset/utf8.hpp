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

#ifndef CHALSET_UTF8_HPP_
#define CHALSET_UTF8_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chalset::utf8 {

// Byte offset of every code point boundary in `text`, including the final
// one at text.size(). Returns nullopt when `text` is not valid UTF-8.
std::optional<std::vector<std::size_t>> boundaries(std::string_view text);

// Number of Unicode scalar values, or nullopt on invalid UTF-8.
std::optional<std::size_t> length(std::string_view text);

// Substring by code point offsets [start, end). Caller guarantees validity.
std::string slice(std::string_view text, std::size_t start, std::size_t end);

// Decodes to code points; invalid sequences become U+FFFD.
std::u32string decode_lossy(std::string_view text);
std::string encode(std::u32string_view code_points);

}  // namespace chalset::utf8

#endif  // CHALSET_UTF8_HPP_
