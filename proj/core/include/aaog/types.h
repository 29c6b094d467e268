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

#ifndef AAOG_TYPES_H_
#define AAOG_TYPES_H_

#include <compare>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace aaog {

// Integer identifier tagged by the kind of thing it names, so a part id can
// never be passed where a proposal id is expected.
template <typename Tag>
struct StrongId {
  int value = -1;

  constexpr StrongId() = default;
  constexpr explicit StrongId(int v) : value(v) {}

  constexpr auto operator<=>(const StrongId&) const = default;
};

using NodeId = StrongId<struct NodeTag>;
using ProposalId = StrongId<struct ProposalTag>;

// Attribute ids are the attribute names used in every file format
// ("gender", "glasses", ...).
using AttrId = std::string;

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

// Axis-aligned box in pixels: top-left corner plus extent.
struct Box {
  double x0 = 0.0;
  double y0 = 0.0;
  double w = 0.0;
  double h = 0.0;

  bool operator==(const Box&) const = default;

  double Area() const { return w * h; }
  Point Center() const { return {x0 + 0.5 * w, y0 + 0.5 * h}; }
  bool Contains(const Point& p) const {
    return p.x >= x0 && p.x <= x0 + w && p.y >= y0 && p.y <= y0 + h;
  }
};

double IntersectionOverUnion(const Box& a, const Box& b);

// One (attribute, value) pair, e.g. gender=female.
struct AttributeValue {
  AttrId attr;
  std::string value;

  auto operator<=>(const AttributeValue&) const = default;
};

// Structural problems in user-supplied data (grammar, files, proposals).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A referenced id, edge or score entry does not exist.
class LookupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inference cannot produce a parse (e.g. a part has no proposals) or refuses
// to run (brute-force guard).
class InferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training data is insufficient for a fit.
class DegenerateDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aaog

template <typename Tag>
struct std::hash<aaog::StrongId<Tag>> {
  std::size_t operator()(const aaog::StrongId<Tag>& id) const noexcept {
    return std::hash<int>{}(id.value);
  }
};

#endif  // AAOG_TYPES_H_
