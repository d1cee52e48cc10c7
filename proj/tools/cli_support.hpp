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

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace seloc::cli {

/// Terminal columns occupied by UTF-8 text: combining marks take none,
/// East Asian wide and fullwidth characters and emoji take two. Invalid
/// bytes count as one column each.
std::size_t displayWidth(std::string_view text);

/// Header row followed by one line per row, columns left-aligned and
/// separated by two spaces; trailing padding is trimmed. Short rows are
/// padded with empty cells.
std::string formatTable(const std::vector<std::vector<std::string>>& rows,
                        const std::vector<std::string>& columns);

}  // namespace seloc::cli
