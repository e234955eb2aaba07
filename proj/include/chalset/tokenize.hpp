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

#ifndef CHALSET_TOKENIZE_HPP_
#define CHALSET_TOKENIZE_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace chalset {

// Lowercases, splits on whitespace and strips leading/trailing punctuation.
// Apostrophes inside a token are kept ("it's", "camel's"). Tokens that are
// pure punctuation disappear.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace chalset

#endif  // CHALSET_TOKENIZE_HPP_
