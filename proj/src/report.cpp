// Copyright 2026 The refmatch Authors
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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "refmatch/sweep.hpp"

namespace refmatch {
namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                    "#bcbd22", "#17becf"};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<Series>& series,
                              const std::vector<double>& x_ticks) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (auto [x, y] : s.points) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  for (double t : x_ticks) {
    x0 = std::min(x0, t);
    x1 = std::max(x1, t);
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1;
  if (!std::isfinite(y0)) y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
     << "font-size=\"15\">" << escape(title) << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw
     << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : x_ticks) {
    os << "<line x1=\"" << sx(t) << "\" y1=\"" << kTop + ph << "\" x2=\"" << sx(t)
       << "\" y2=\"" << kTop + ph + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << sx(t) << "\" y=\"" << kTop + ph + 18
       << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
  }
  for (int k = 0; k <= 4; ++k) {
    const double y = y0 + (y1 - y0) * k / 4.0;
    os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << sy(y) << "\" x2=\"" << kLeft
       << "\" y2=\"" << sy(y) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << sy(y) + 4
       << "\" text-anchor=\"end\">" << fmt(y) << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15
     << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" "
     << "transform=\"rotate(-90 18 " << kTop + ph / 2 << ")\">" << escape(y_label)
     << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (auto [x, y] : series[s].points) os << sx(x) << ',' << sy(y) << ' ';
    os << "\"/>\n";
    for (auto [x, y] : series[s].points) {
      os << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"3\" fill=\""
         << color << "\"/>\n";
    }
    const double ly = kTop + 14 + 18.0 * s;
    os << "<line x1=\"" << kLeft + pw + 12 << "\" y1=\"" << ly << "\" x2=\""
       << kLeft + pw + 32 << "\" y2=\"" << ly << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << kLeft + pw + 38 << "\" y=\"" << ly + 4 << "\">"
       << escape(series[s].name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<std::filesystem::path> write_report(
    const std::vector<MetricsRow>& rows, const std::filesystem::path& out_dir) {
  if (rows.empty()) throw Error(ErrorCode::Parse, "metrics CSV has no rows");
  std::filesystem::create_directories(out_dir);
  const auto summary = summarize(rows);
  std::vector<double> alphas;
  {
    std::set<double> seen;
    for (const auto& r : rows) seen.insert(r.alpha);
    alphas.assign(seen.begin(), seen.end());
  }
  std::vector<std::string> mechs;
  for (const auto& s : summary) {
    if (std::find(mechs.begin(), mechs.end(), s.mechanism) == mechs.end()) {
      mechs.push_back(s.mechanism);
    }
  }
  auto per_mechanism = [&](auto field) {
    std::vector<Series> out;
    for (const auto& m : mechs) {
      Series s{m, {}};
      for (const auto& row : summary) {
        if (row.mechanism == m) s.points.emplace_back(row.alpha, field(row));
      }
      out.push_back(std::move(s));
    }
    return out;
  };

  std::vector<std::filesystem::path> written;
  auto save = [&](const std::string& name, const std::string& svg) {
    const auto path = out_dir / name;
    write_text(path, svg);
    written.push_back(path);
  };
  save("rho_vs_alpha.svg",
       render_line_chart("Average rank", "alpha", "mean rho",
                         per_mechanism([](const SummaryRow& r) { return r.rho_mean; }),
                         alphas));
  save("z_vs_alpha.svg",
       render_line_chart("Government objective", "alpha", "mean z",
                         per_mechanism([](const SummaryRow& r) { return r.z_mean; }),
                         alphas));
  for (const auto& m : mechs) {
    if (m != "crsd" && m != "crv") continue;
    std::vector<Series> curves;
    std::vector<double> ranks;
    for (const auto& row : summary) {
      if (row.mechanism != m) continue;
      Series s{"alpha " + fmt(row.alpha), {}};
      for (std::size_t k = 0; k < row.cumulative_mean.size(); ++k) {
        s.points.emplace_back(static_cast<double>(k + 1), row.cumulative_mean[k]);
      }
      curves.push_back(std::move(s));
    }
    if (!curves.empty()) {
      for (std::size_t k = 1; k <= curves.front().points.size(); k += 5) {
        ranks.push_back(static_cast<double>(k));
      }
    }
    save("cumulative_" + m + ".svg",
         render_line_chart("Cumulative rank distribution (" + m + ")", "rank k",
                           "families at rank k or better", curves, ranks));
  }
  const bool incomplete = std::any_of(rows.begin(), rows.end(),
                                      [](const MetricsRow& r) { return r.tau > 0; });
  if (incomplete) {
    save("tau_vs_alpha.svg",
         render_line_chart("Families outside their list", "alpha", "mean tau",
                           per_mechanism([](const SummaryRow& r) { return r.tau_mean; }),
                           alphas));
  }
  return written;
}

}  // namespace refmatch
