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

// Bridges between std::string_view and the Abseil string utilities. The
// Abseil build in use keeps its own string_view type, so views are converted
// at the boundary.
#ifndef DPGNN_STRINGS_H_
#define DPGNN_STRINGS_H_

#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"

namespace dpgnn {

inline absl::string_view ToAbsl(std::string_view s) {
  return absl::string_view(s.data(), s.size());
}

inline std::string_view ToStd(absl::string_view s) {
  return std::string_view(s.data(), s.size());
}

namespace strings_internal {

template <typename T>
decltype(auto) Bridge(const T& value) {
  if constexpr (std::is_convertible_v<const T&, std::string_view> &&
                !std::is_convertible_v<const T&, absl::string_view>) {
    return ToAbsl(value);
  } else {
    return (value);
  }
}

}  // namespace strings_internal

// absl::StrCat and absl::StrAppend that also accept std::string_view.
template <typename... Args>
std::string StrCat(const Args&... args) {
  return absl::StrCat(strings_internal::Bridge(args)...);
}

template <typename... Args>
void StrAppend(std::string* out, const Args&... args) {
  absl::StrAppend(out, strings_internal::Bridge(args)...);
}

// Splits on a single delimiter, keeping empty pieces.
std::vector<std::string_view> SplitOn(std::string_view text, char delimiter);

// Splits on any character of `delimiters`, dropping empty pieces.
std::vector<std::string_view> SplitOnAny(std::string_view text,
                                         std::string_view delimiters);

std::string_view StripWhitespace(std::string_view text);

}  // namespace dpgnn

#endif  // DPGNN_STRINGS_H_
