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

#ifndef CHALSET_JUDGMENT_HPP_
#define CHALSET_JUDGMENT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace chalset {

enum class Verdict { kYes, kNo, kNotApplicable };

// "yes", "no", "not-applicable".
std::string_view verdict_name(Verdict verdict);
std::optional<Verdict> parse_verdict(std::string_view name);

struct Judgment {
  std::string annotator_id;
  std::string item_id;
  std::string system_id;
  Verdict verdict = Verdict::kNo;
  std::uint64_t revision = 0;
  std::string timestamp;

  friend bool operator==(const Judgment&, const Judgment&) = default;
};

}  // namespace chalset

#endif  // CHALSET_JUDGMENT_HPP_
