// Copyright 2026 The AAOG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AAOG_SVG_H_
#define AAOG_SVG_H_

#include <filesystem>
#include <string>

#include "aaog/grammar.h"
#include "aaog/parse_graph.h"

namespace aaog {

// Schematic stick figure of a parse graph: one <line class="stick"> per
// dependency edge, a circle per selected part and a text legend of the
// attribute assignment. Output depends only on the inputs.
std::string RenderSvg(const ParseGraph& pg, const AOGrammar& grammar);

// Throws IoError when the file cannot be written.
void WriteSvg(const ParseGraph& pg, const AOGrammar& grammar,
              const std::filesystem::path& out);

}  // namespace aaog

#endif  // AAOG_SVG_H_
