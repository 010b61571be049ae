//
// Copyright 2026 The dpgnn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dpgnn/strings.h"

#include "absl/strings/ascii.h"
#include "absl/strings/str_split.h"

namespace dpgnn {

std::vector<std::string_view> SplitOn(std::string_view text, char delimiter) {
  std::vector<std::string_view> out;
  for (absl::string_view piece : absl::StrSplit(ToAbsl(text), delimiter)) {
    out.push_back(ToStd(piece));
  }
  return out;
}

std::vector<std::string_view> SplitOnAny(std::string_view text,
                                         std::string_view delimiters) {
  std::vector<std::string_view> out;
  for (absl::string_view piece :
       absl::StrSplit(ToAbsl(text), absl::ByAnyChar(ToAbsl(delimiters)),
                      absl::SkipEmpty())) {
    out.push_back(ToStd(piece));
  }
  return out;
}

std::string_view StripWhitespace(std::string_view text) {
  return ToStd(absl::StripAsciiWhitespace(ToAbsl(text)));
}

}  // namespace dpgnn
