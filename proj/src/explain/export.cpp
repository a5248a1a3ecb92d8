// Copyright 2026 The ebmtraj Authors
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

#include "ebmtraj/explain/export.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace ebmtraj {
namespace {

std::string escape_xml(const std::string& s) {
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

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Fixed two-decimal coordinates keep the SVG text stable across runs.
std::string px(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

std::string svg_header(double width, double height) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(width) + "\" height=\"" +
         px(height) + "\" viewBox=\"0 0 " + px(width) + " " + px(height) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

// Blue for negative, red for positive contributions.
std::string diverging_color(double v, double scale) {
  const double t = scale > 0.0 ? std::clamp(v / scale, -1.0, 1.0) : 0.0;
  const int fade = static_cast<int>(std::lround(255.0 * (1.0 - std::abs(t))));
  std::array<int, 3> rgb = t >= 0.0 ? std::array<int, 3>{255, fade, fade}
                                    : std::array<int, 3>{fade, fade, 255};
  return "rgb(" + std::to_string(rgb[0]) + "," + std::to_string(rgb[1]) + "," +
         std::to_string(rgb[2]) + ")";
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

void write_importance_csv(std::ostream& out, const ImportanceReport& report) {
  out << "term,value\n";
  for (std::size_t i = 0; i < report.labels.size(); ++i) {
    out << csv_field(report.labels[i]) << ',' << format_number(report.values[i]) << '\n';
  }
}

void write_dependence_csv(std::ostream& out, const DependenceCurve& curve) {
  if (curve.term.kind == TermKind::kMain) {
    out << "bin_low,bin_high,contribution,population\n";
    for (std::size_t b = 0; b < curve.contributions.size(); ++b) {
      out << format_number(curve.low[b]) << ',' << format_number(curve.high[b]) << ','
          << format_number(curve.contributions[b]) << ',' << format_number(curve.populations[b])
          << '\n';
    }
    return;
  }
  out << "row_low,row_high,col_low,col_high,contribution,population\n";
  for (std::size_t r = 0; r < curve.rows; ++r) {
    for (std::size_t c = 0; c < curve.cols; ++c) {
      const std::size_t cell = r * curve.cols + c;
      out << format_number(curve.low[r]) << ',' << format_number(curve.high[r]) << ','
          << format_number(curve.col_low[c]) << ',' << format_number(curve.col_high[c]) << ','
          << format_number(curve.contributions[cell]) << ','
          << format_number(curve.populations[cell]) << '\n';
    }
  }
}

void write_local_csv(std::ostream& out, const LocalExplanation& local) {
  out << "term,contribution\n";
  out << "(intercept)," << format_number(local.intercept) << '\n';
  for (std::size_t i = 0; i < local.labels.size(); ++i) {
    out << csv_field(local.labels[i]) << ',' << format_number(local.contributions[i]) << '\n';
  }
  out << "(prediction)," << format_number(local.prediction) << '\n';
}

std::string importance_svg(const ImportanceReport& report, const std::string& title,
                           std::size_t top_n) {
  std::vector<std::size_t> order = report.ranking();
  if (order.size() > top_n) order.resize(top_n);
  const double label_w = 180.0, bar_w = 360.0, row_h = 18.0, top = 30.0;
  const double width = label_w + bar_w + 80.0;
  const double height = top + row_h * static_cast<double>(order.size()) + 10.0;
  double vmax = 0.0;
  for (std::size_t i : order) vmax = std::max(vmax, report.values[i]);

  std::string svg = svg_header(width, height);
  svg += "<text x=\"10\" y=\"18\" font-size=\"13\">" + escape_xml(title) + "</text>\n";
  for (std::size_t r = 0; r < order.size(); ++r) {
    const std::size_t i = order[r];
    const double y = top + row_h * static_cast<double>(r);
    const double w = vmax > 0.0 ? bar_w * report.values[i] / vmax : 0.0;
    svg += "<text x=\"" + px(label_w - 6.0) + "\" y=\"" + px(y + 12.0) +
           "\" text-anchor=\"end\">" + escape_xml(report.labels[i]) + "</text>\n";
    svg += "<rect x=\"" + px(label_w) + "\" y=\"" + px(y + 2.0) + "\" width=\"" + px(w) +
           "\" height=\"" + px(row_h - 4.0) + "\" fill=\"steelblue\"/>\n";
    svg += "<text x=\"" + px(label_w + w + 4.0) + "\" y=\"" + px(y + 12.0) + "\">" +
           format_number(std::round(report.values[i] * 1e4) / 1e4) + "</text>\n";
  }
  return svg + "</svg>\n";
}

std::string dependence_svg(const DependenceCurve& curve) {
  const double width = 480.0, height = 320.0, margin = 40.0;
  const double plot_w = width - 2 * margin, plot_h = height - 2 * margin;
  std::string svg = svg_header(width, height);
  svg += "<text x=\"10\" y=\"18\" font-size=\"13\">" + escape_xml(curve.label) + "</text>\n";

  if (curve.term.kind == TermKind::kPair) {
    // Value bins only; the missing row/column is left out of the picture.
    const std::size_t rows = curve.rows > 1 ? curve.rows - 1 : curve.rows;
    const std::size_t cols = curve.cols > 1 ? curve.cols - 1 : curve.cols;
    double scale = 0.0;
    for (double v : curve.contributions) scale = std::max(scale, std::abs(v));
    const double cw = plot_w / static_cast<double>(cols);
    const double ch = plot_h / static_cast<double>(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        const double v = curve.contributions[r * curve.cols + c];
        svg += "<rect x=\"" + px(margin + cw * static_cast<double>(c)) + "\" y=\"" +
               px(margin + plot_h - ch * static_cast<double>(r + 1)) + "\" width=\"" + px(cw) +
               "\" height=\"" + px(ch) + "\" fill=\"" + diverging_color(v, scale) + "\"/>\n";
      }
    }
    return svg + "</svg>\n";
  }

  const std::size_t bins = curve.contributions.size() > 1 ? curve.contributions.size() - 1 : 1;
  const double x0 = curve.low.front();
  const double x1 = curve.high[bins - 1];
  double y_lo = 0.0, y_hi = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    y_lo = std::min(y_lo, curve.contributions[b]);
    y_hi = std::max(y_hi, curve.contributions[b]);
  }
  if (y_hi - y_lo <= 0.0) {
    y_lo -= 1.0;
    y_hi += 1.0;
  }
  auto sx = [&](double x) {
    return x1 > x0 ? margin + plot_w * (x - x0) / (x1 - x0) : margin + plot_w / 2.0;
  };
  auto sy = [&](double y) { return margin + plot_h * (y_hi - y) / (y_hi - y_lo); };

  svg += "<line x1=\"" + px(margin) + "\" y1=\"" + px(sy(0.0)) + "\" x2=\"" +
         px(margin + plot_w) + "\" y2=\"" + px(sy(0.0)) + "\" stroke=\"#999\"/>\n";
  std::string path = "M";
  for (std::size_t b = 0; b < bins; ++b) {
    const double y = sy(curve.contributions[b]);
    path += (b == 0 ? "" : " L") + px(sx(curve.low[b])) + " " + px(y) + " L" +
            px(sx(curve.high[b])) + " " + px(y);
  }
  svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"firebrick\" stroke-width=\"1.5\"/>\n";
  svg += "<text x=\"" + px(margin) + "\" y=\"" + px(height - 10.0) + "\">" + format_number(x0) +
         "</text>\n";
  svg += "<text x=\"" + px(margin + plot_w) + "\" y=\"" + px(height - 10.0) +
         "\" text-anchor=\"end\">" + format_number(x1) + "</text>\n";
  return svg + "</svg>\n";
}

}  // namespace ebmtraj
