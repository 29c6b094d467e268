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

#include "aaog/svg.h"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "aaog/json_io.h"

namespace aaog {
namespace {

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string RenderSvg(const ParseGraph& pg, const AOGrammar& grammar) {
  if (auto problems = CheckParseGraph(pg, grammar); !problems.empty()) {
    throw ValidationError("cannot render invalid parse graph: " +
                          problems.front());
  }
  constexpr double kMargin = 20.0;
  constexpr double kLegendLine = 14.0;
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  for (const auto& s : pg.states) {
    x0 = std::min(x0, s.x);
    y0 = std::min(y0, s.y);
    x1 = std::max(x1, s.x);
    y1 = std::max(y1, s.y);
  }
  const double legend_h =
      kLegendLine * static_cast<double>(pg.attribute_assignment.size() + 1);
  const double width = std::max(x1 - x0, 1.0) + 2 * kMargin;
  const double height = std::max(y1 - y0, 1.0) + 2 * kMargin + legend_h;
  auto px = [&](double x) { return Num(x - x0 + kMargin); };
  auto py = [&](double y) { return Num(y - y0 + kMargin); };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + Num(width) +
         "\" height=\"" + Num(height) + "\" viewBox=\"0 0 " + Num(width) + " " +
         Num(height) + "\">\n";
  out += "  <g id=\"sticks\" stroke=\"#1f77b4\" stroke-width=\"3\">\n";
  int index = 1;
  for (const auto& e : grammar.dg_edges) {
    const PartState* a = pg.StateFor(e.parent);
    const PartState* b = pg.StateFor(e.child);
    out += "    <line class=\"stick\" data-index=\"" + std::to_string(index++) +
           "\" data-parts=\"" + Escape(grammar.NameOf(e.parent)) + "-" +
           Escape(grammar.NameOf(e.child)) + "\" x1=\"" + px(a->x) +
           "\" y1=\"" + py(a->y) + "\" x2=\"" + px(b->x) + "\" y2=\"" +
           py(b->y) + "\"/>\n";
  }
  out += "  </g>\n";
  out += "  <g id=\"keypoints\">\n";
  for (const auto& s : pg.states) {
    const bool atomic = grammar.IsTerminal(s.part);
    out += "    <circle class=\"" + std::string(atomic ? "joint" : "part") +
           "\" data-part=\"" + Escape(grammar.NameOf(s.part)) + "\" cx=\"" +
           px(s.x) + "\" cy=\"" + py(s.y) + "\" r=\"" + (atomic ? "3" : "5") +
           "\" fill=\"" + (atomic ? "#d62728" : "none") + "\" stroke=\"" +
           "#d62728\"/>\n";
  }
  out += "  </g>\n";
  out += "  <g id=\"legend\" font-family=\"monospace\" font-size=\"11\">\n";
  double ty = height - legend_h + kLegendLine - 3.0;
  out += "    <text x=\"4\" y=\"" + Num(ty) + "\">score " +
         Num(pg.total_score) + "</text>\n";
  for (const auto& [attr, value] : pg.attribute_assignment) {
    ty += kLegendLine;
    out += "    <text class=\"attribute\" x=\"4\" y=\"" + Num(ty) + "\">" +
           Escape(attr) + " = " + Escape(value) + "</text>\n";
  }
  out += "  </g>\n";
  out += "</svg>\n";
  return out;
}

void WriteSvg(const ParseGraph& pg, const AOGrammar& grammar,
              const std::filesystem::path& out) {
  WriteTextFile(out, RenderSvg(pg, grammar));
}

}  // namespace aaog
