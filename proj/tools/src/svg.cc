// Copyright 2026 The Formation Authors
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

#include "formation/svg.h"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

namespace formation {
namespace {

constexpr double kCanvas = 800.0;
constexpr double kMargin = 40.0;

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                "#bcbd22", "#17becf"};

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string TrajectorySvg(const TrajectoryLog& log, const SensingGraph& final_graph,
                          int max_points_per_agent) {
  const int n = log.num_agents;
  const size_t steps = log.states.size();
  double lo_x = std::numeric_limits<double>::infinity();
  double lo_y = lo_x;
  double hi_x = -lo_x;
  double hi_y = -lo_x;
  for (size_t k = 0; k < steps; ++k) {
    const Vector q = log.Positions(k);
    for (int i = 0; i < n; ++i) {
      lo_x = std::min(lo_x, q[2 * i]);
      hi_x = std::max(hi_x, q[2 * i]);
      lo_y = std::min(lo_y, q[2 * i + 1]);
      hi_y = std::max(hi_y, q[2 * i + 1]);
    }
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
  const double scale = (kCanvas - 2 * kMargin) / span;
  auto sx = [&](double x) { return kMargin + (x - lo_x) * scale; };
  // SVG y grows downward.
  auto sy = [&](double y) { return kCanvas - kMargin - (y - lo_y) * scale; };

  const size_t stride =
      std::max<size_t>(1, steps / static_cast<size_t>(std::max(1, max_points_per_agent)));

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas
      << "\" height=\"" << kCanvas << "\" viewBox=\"0 0 " << kCanvas << " " << kCanvas
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int i = 0; i < n; ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (size_t k = 0; k < steps; k += stride) {
      const Vector q = log.Positions(k);
      out << Fmt(sx(q[2 * i])) << "," << Fmt(sy(q[2 * i + 1])) << " ";
    }
    const Vector last = log.Positions(steps - 1);
    out << Fmt(sx(last[2 * i])) << "," << Fmt(sy(last[2 * i + 1])) << "\"/>\n";
  }
  if (steps > 0) {
    const Vector first = log.Positions(0);
    const Vector last = log.Positions(steps - 1);
    for (const Edge& e : final_graph.edges()) {
      out << "<line x1=\"" << Fmt(sx(last[2 * e.i])) << "\" y1=\"" << Fmt(sy(last[2 * e.i + 1]))
          << "\" x2=\"" << Fmt(sx(last[2 * e.j])) << "\" y2=\"" << Fmt(sy(last[2 * e.j + 1]))
          << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    }
    for (int i = 0; i < n; ++i) {
      const char* color = kPalette[i % std::size(kPalette)];
      out << "<rect x=\"" << Fmt(sx(first[2 * i]) - 4) << "\" y=\"" << Fmt(sy(first[2 * i + 1]) - 4)
          << "\" width=\"8\" height=\"8\" fill=\"" << color << "\"/>\n";
      out << "<circle cx=\"" << Fmt(sx(last[2 * i])) << "\" cy=\"" << Fmt(sy(last[2 * i + 1]))
          << "\" r=\"4\" fill=\"" << color << "\"/>\n";
      out << "<text x=\"" << Fmt(sx(last[2 * i]) + 6) << "\" y=\"" << Fmt(sy(last[2 * i + 1]) - 6)
          << "\" font-size=\"12\" font-family=\"sans-serif\">" << i + 1 << "</text>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace formation
