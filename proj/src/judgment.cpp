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

#include "chalset/judgment.hpp"

namespace chalset {

std::string_view verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::kYes: return "yes";
    case Verdict::kNo: return "no";
    case Verdict::kNotApplicable: return "not-applicable";
  }
  return "";
}

std::optional<Verdict> parse_verdict(std::string_view name) {
  if (name == "yes") return Verdict::kYes;
  if (name == "no") return Verdict::kNo;
  if (name == "not-applicable") return Verdict::kNotApplicable;
  return std::nullopt;
}

}  // namespace chalset
