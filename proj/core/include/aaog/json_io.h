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

#ifndef AAOG_JSON_IO_H_
#define AAOG_JSON_IO_H_

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aaog/evaluation.h"
#include "aaog/grammar.h"
#include "aaog/inference.h"
#include "aaog/learning.h"
#include "aaog/parse_graph.h"
#include "aaog/relation_models.h"
#include "aaog/synthetic.h"

// JSON documents. Keys are written in a fixed order and doubles in shortest
// round-trip form, so serializing the same value twice gives the same bytes
// and parsing a written document gives back an equal value. Parts are named
// by their grammar name everywhere except inside the grammar document, which
// uses numeric node ids. Malformed documents throw ValidationError.

namespace aaog {

inline constexpr int kGrammarSchemaVersion = 1;
inline constexpr int kModelsSchemaVersion = 1;
inline constexpr int kParseSchemaVersion = 1;
inline constexpr int kProposalsSchemaVersion = 1;
inline constexpr int kAnnotationSchemaVersion = 1;
inline constexpr int kSceneSchemaVersion = 1;
inline constexpr int kReportSchemaVersion = 1;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string ReadTextFile(const std::filesystem::path& path);
// Creates missing parent directories.
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

// {"root", "nodes": [{"id", "kind", "name", "children"}], "psg_edges",
//  "dg_edges", "attributes": [{"id", "name", "domain"}], "part_type_count"}
// Edges are [parent_id, child_id]. Parsing does not run Validate().
std::string GrammarToJson(const AOGrammar& grammar);
AOGrammar GrammarFromJson(std::string_view text);

// {"states": [{"part", "x", "y", "part_type", "proposal"}], "psg_edges",
//  "dg_edges", "attributes": {attr: value}, "total_score"}
std::string ParseGraphToJson(const ParseGraph& pg, const AOGrammar& grammar);
ParseGraph ParseGraphFromJson(std::string_view text, const AOGrammar& grammar);

// {"part_type_count", "syntactic": {"parent->child": [[row] x n]},
//  "kinematic": {"parent->child": [{"w", "mu": [x, y], "cov": [[..], [..]]}]},
//  "association": {part: [attrs], "mi": {part: {attr: nats}}}}
// Rows of a syntactic matrix are parent types. The key "mi" inside
// "association" is reserved, so no part may be named "mi".
std::string ModelsToJson(const RelationModels& models, const AOGrammar& grammar);
RelationModels ModelsFromJson(std::string_view text, const AOGrammar& grammar);

// One line: {"image", "joints": {part: [x, y, visible]}, "person_box",
//  "attributes": {attr: value | null}}
std::string AnnotationToJson(const Annotation& ann, const AOGrammar& grammar);
Annotation AnnotationFromJson(std::string_view text, const AOGrammar& grammar);
// JSON-lines; blank lines are skipped; errors carry a "line N:" prefix.
std::vector<Annotation> ReadAnnotations(std::istream& in,
                                        const AOGrammar& grammar);
void WriteAnnotations(const std::vector<Annotation>& anns,
                      const AOGrammar& grammar, std::ostream& out);

// {"image_size": [w, h], "persons": [{"joints": {part: [x, y]},
//  "attributes": {attr: value}}]}
std::string SceneToJson(const SyntheticScene& scene, const AOGrammar& grammar);
SyntheticScene SceneFromJson(std::string_view text, const AOGrammar& grammar);

// {attr: {value: score}} in grammar order plus "prediction": {attr: value}.
std::string AttributeScoresToJson(const AttributeScores& scores,
                                  const AOGrammar& grammar);

std::string ReportToJson(const DiagnosticReport& report,
                         const AOGrammar& grammar);

}  // namespace aaog

#endif  // AAOG_JSON_IO_H_
